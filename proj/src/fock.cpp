#include "herald/fock.hpp"

#include <algorithm>
#include <cmath>

namespace herald {

namespace {

template <class Map>
double map_norm2(const Map& m) {
    double s = 0.0;
    for (const auto& [k, a] : m) s += std::norm(a);
    return s;
}

template <class Map>
void map_prune(Map& m, double threshold) {
    for (auto it = m.begin(); it != m.end();) {
        if (std::abs(it->second) < threshold)
            it = m.erase(it);
        else
            ++it;
    }
}

template <class Map>
std::vector<std::pair<std::uint64_t, Complex>> map_sorted(const Map& m) {
    std::vector<std::pair<std::uint64_t, Complex>> v(m.begin(), m.end());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return v;
}

}  // namespace

double PhotonVector::norm2() const { return map_norm2(amps_); }
void PhotonVector::prune(double threshold) { map_prune(amps_, threshold); }
void PhotonVector::scale(Complex c) {
    for (auto& [k, a] : amps_) a *= c;
}
std::vector<std::pair<std::uint64_t, Complex>> PhotonVector::sorted_entries() const {
    return map_sorted(amps_);
}

double JointState::norm2() const { return map_norm2(amps_); }
void JointState::prune(double threshold) { map_prune(amps_, threshold); }
void JointState::scale(Complex c) {
    for (auto& [k, a] : amps_) a *= c;
}
std::vector<std::pair<std::uint64_t, Complex>> JointState::sorted_entries() const {
    return map_sorted(amps_);
}

Complex inner_product(const PhotonVector& x, const PhotonVector& y) {
    if (x.frame() != y.frame())
        throw std::invalid_argument("inner_product: frame mismatch");
    const auto& big = x.size() >= y.size() ? x : y;
    const auto& small = x.size() >= y.size() ? y : x;
    const bool small_is_y = &small == &y;
    Complex s{};
    for (const auto& [k, a] : small.entries()) {
        auto it = big.entries().find(k);
        if (it == big.entries().end()) continue;
        s += small_is_y ? std::conj(it->second) * a : std::conj(a) * it->second;
    }
    return s;
}

Complex inner_product(const JointState& x, const JointState& y) {
    if (x.frame() != y.frame())
        throw std::invalid_argument("inner_product: frame mismatch");
    const auto& big = x.size() >= y.size() ? x : y;
    const auto& small = x.size() >= y.size() ? y : x;
    const bool small_is_y = &small == &y;
    Complex s{};
    for (const auto& [k, a] : small.entries()) {
        auto it = big.entries().find(k);
        if (it == big.entries().end()) continue;
        s += small_is_y ? std::conj(it->second) * a : std::conj(a) * it->second;
    }
    return s;
}

JointState sector_filter(const JointState& s,
                         const std::function<bool(DotLevel, DotLevel)>& keep) {
    JointState out(s.frame());
    for (const auto& [k, a] : s.entries()) {
        DotLevel l1, l2;
        OccupationTuple t;
        JointState::unkey(k, l1, l2, t);
        if (keep(l1, l2)) out.add(l1, l2, t, a);
    }
    return out;
}

double truncation_tail_bound(double lambda, int n_max) {
    if (lambda < 0.0 || lambda >= 1.0)
        throw std::domain_error("truncation_tail_bound: lambda must be in [0,1)");
    if (lambda == 0.0) return 0.0;
    return std::pow(lambda, 2.0 * (n_max + 1));
}

int truncation_level(double lambda, double eps) {
    if (lambda < 0.0 || lambda >= 1.0)
        throw std::domain_error("truncation_level: lambda must be in [0,1)");
    if (lambda == 0.0) return 0;
    int n = int(std::ceil(std::log(eps) / (2.0 * std::log(lambda))));
    return std::max(n, 0);
}

}  // namespace herald
