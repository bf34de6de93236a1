#include "herald/heralding.hpp"

#include <omp.h>

#include <cmath>

namespace herald {

namespace {

// Per-Fock-level factors sqrt(1-lambda^2) lambda^m {cos, -i sin}(g sqrt(m) t).
struct DotFactors {
    std::vector<Complex> cosv, sinv;  // index m
    void fill(const DotParams& p, double t, int s_max) {
        cosv.resize(std::size_t(s_max) + 1);
        sinv.resize(std::size_t(s_max) + 1);
        double w = std::sqrt(1.0 - p.lambda * p.lambda);
        for (int m = 0; m <= s_max; ++m) {
            const double ph = p.g * std::sqrt(double(m)) * t;
            cosv[std::size_t(m)] = Complex(w * std::cos(ph), 0.0);
            sinv[std::size_t(m)] = Complex(0.0, -w * std::sin(ph));
            w *= p.lambda;
        }
    }
};

// Projected amplitude vector over the free output index k (path-c sigma-
// photons) for one dot-sector class. h = 0: spin branch (cos), 1: sigma-
// hole, 2: sigma+ hole.
struct ClassAmps {
    int klo = 0;
    std::vector<Complex> v;
    double norm2() const {
        double s = 0.0;
        for (const Complex& a : v) s += std::norm(a);
        return s;
    }
};

ClassAmps class_amplitudes(int h1, int h2, int n1, int n2, const DotFactors& f1,
                           const DotFactors& f2, const BsElementTable& table) {
    ClassAmps out;
    const int T = n1 + n2;
    const int holes = (h1 != 0) + (h2 != 0);
    if ((T + holes) % 2 != 0) return out;
    const int S = (T + holes) / 2;
    if (S < 0) return out;
    const int nsm = S - (h1 == 1) - (h2 == 1);
    const int nsp = S - (h1 == 2) - (h2 == 2);
    if (nsm < 0 || nsp < 0) return out;
    const int mlo = (h1 != 0) ? 1 : 0;
    const int mhi = S - ((h2 != 0) ? 1 : 0);
    if (mhi < mlo) return out;
    const int klo = std::max(0, n1 - nsp), khi = std::min(n1, nsm);
    if (khi < klo) return out;

    const double* Em = table.level(nsm);
    const double* Ep = table.level(nsp);
    const int wm = nsm + 1, wp = nsp + 1;
    out.klo = klo;
    out.v.assign(std::size_t(khi - klo + 1), Complex{});
    for (int m = mlo; m <= mhi; ++m) {
        const int mu = S - m;
        const Complex c = (h1 == 0 ? f1.cosv[std::size_t(m)] : f1.sinv[std::size_t(m)]) *
                          (h2 == 0 ? f2.cosv[std::size_t(mu)] : f2.sinv[std::size_t(mu)]);
        if (c == Complex{}) continue;
        const int am = m - (h1 == 1);  // path-a sigma- photons
        const int ap = m - (h1 == 2);
        const double* rm = &Em[std::size_t(am) * wm];
        const double* rp = &Ep[std::size_t(ap) * wp];
        for (int k = klo; k <= khi; ++k)
            out.v[std::size_t(k - klo)] += c * (rm[k] * rp[n1 - k]);
    }
    return out;
}

Complex overlap(const ClassAmps& x, const ClassAmps& y) {
    // same (nsm, nsp) classes share the k indexing
    if (x.v.empty() || y.v.empty()) return {};
    Complex s{};
    const int lo = std::max(x.klo, y.klo);
    const int hi = std::min(x.klo + int(x.v.size()), y.klo + int(y.v.size())) - 1;
    for (int k = lo; k <= hi; ++k)
        s += x.v[std::size_t(k - x.klo)] * std::conj(y.v[std::size_t(k - y.klo)]);
    return s;
}

}  // namespace

OutcomeResult heralded_outcome(const DotParams& p1, const DotParams& p2, double t, int n1,
                               int n2, const BsElementTable& table) {
    if (n1 < 0 || n2 < 0) throw std::invalid_argument("heralded_outcome: negative count");
    const int S_max = (n1 + n2) / 2 + 1;
    if (table.max_level() < S_max)
        throw std::invalid_argument("heralded_outcome: element table too small");

    OutcomeResult r;
    r.n1 = n1;
    r.n2 = n2;

    DotFactors f1, f2;
    f1.fill(p1, t, S_max);
    f2.fill(p2, t, S_max);

    const Complex a1m = p1.initial_spin[0], a1p = p1.initial_spin[1];
    const Complex a2m = p2.initial_spin[0], a2p = p2.initial_spin[1];
    const double s1 = std::norm(a1m) + std::norm(a1p);
    const double s2 = std::norm(a2m) + std::norm(a2p);

    // both dots in the spin sector: one photon vector, spin weight s1 s2
    r.spin_spin_weight = class_amplitudes(0, 0, n1, n2, f1, f2, table).norm2() * s1 * s2;

    // one dot excited
    r.mixed_weight += class_amplitudes(0, 1, n1, n2, f1, f2, table).norm2() * s1 * std::norm(a2m);
    r.mixed_weight += class_amplitudes(0, 2, n1, n2, f1, f2, table).norm2() * s1 * std::norm(a2p);
    r.mixed_weight += class_amplitudes(1, 0, n1, n2, f1, f2, table).norm2() * std::norm(a1m) * s2;
    r.mixed_weight += class_amplitudes(2, 0, n1, n2, f1, f2, table).norm2() * std::norm(a1p) * s2;

    // trion-trion sector; basis (t-,t~-), (t-,t~+), (t+,t~-), (t+,t~+)
    const ClassAmps vmm = class_amplitudes(1, 1, n1, n2, f1, f2, table);
    const ClassAmps vmp = class_amplitudes(1, 2, n1, n2, f1, f2, table);
    const ClassAmps vpm = class_amplitudes(2, 1, n1, n2, f1, f2, table);
    const ClassAmps vpp = class_amplitudes(2, 2, n1, n2, f1, f2, table);
    const Complex beta[4] = {a1m * a2m, a1m * a2p, a1p * a2m, a1p * a2p};
    auto& rho = r.trion_density;
    rho(0, 0) = std::norm(beta[0]) * vmm.norm2();
    rho(1, 1) = std::norm(beta[1]) * vmp.norm2();
    rho(2, 2) = std::norm(beta[2]) * vpm.norm2();
    rho(3, 3) = std::norm(beta[3]) * vpp.norm2();
    // only (t-,t~+) and (t+,t~-) share photon quantum numbers
    const Complex x = beta[1] * std::conj(beta[2]) * overlap(vmp, vpm);
    rho(1, 2) = x;
    rho(2, 1) = std::conj(x);

    r.probability = r.spin_spin_weight + r.mixed_weight + rho.trace().real();
    return r;
}

std::vector<std::pair<int, int>> outcome_grid(int total_max) {
    std::vector<std::pair<int, int>> v;
    for (int T = 0; T <= total_max; ++T)
        for (int n1 = 0; n1 <= T; ++n1) v.emplace_back(n1, T - n1);
    return v;
}

std::vector<OutcomeResult> outcome_scan(const DotParams& p1, const DotParams& p2, double t,
                                        const std::vector<std::pair<int, int>>& outcomes,
                                        BsElementTable& table, bool parallel) {
    int need = 1;
    for (const auto& [n1, n2] : outcomes) need = std::max(need, (n1 + n2) / 2 + 1);
    table.ensure(need);
    std::vector<OutcomeResult> res(outcomes.size());
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(outcomes.size()); ++i)
        res[std::size_t(i)] =
            heralded_outcome(p1, p2, t, outcomes[std::size_t(i)].first,
                             outcomes[std::size_t(i)].second, table);
    return res;
}

std::vector<OutcomeResult> outcome_scan_covering(const DotParams& p1, const DotParams& p2,
                                                 double t, double eps, BsElementTable& table,
                                                 bool parallel) {
    std::vector<OutcomeResult> all;
    double cum = 0.0;
    for (int T = 0; T <= 100000; ++T) {
        table.ensure(T / 2 + 2);
        std::vector<OutcomeResult> row(std::size_t(T) + 1);
#pragma omp parallel for schedule(dynamic) if (parallel)
        for (int n1 = 0; n1 <= T; ++n1)
            row[std::size_t(n1)] = heralded_outcome(p1, p2, t, n1, T - n1, table);
        for (auto& r : row) {
            cum += r.probability;
            all.push_back(std::move(r));
        }
        if (1.0 - cum < eps) return all;
    }
    throw std::runtime_error("outcome_scan_covering: coverage not reached");
}

}  // namespace herald
