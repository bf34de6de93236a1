#include "herald/optics.hpp"

#include <gmpxx.h>
#include <omp.h>

#include <cmath>
#include <memory>

namespace herald {

namespace {

// sign * exp(log_scale) of an mpz, using mantissa + base-2 exponent so huge
// integers convert without overflow.
double scaled_to_double(const mpz_class& s, double log_scale) {
    if (s == 0) return 0.0;
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, s.get_mpz_t());
    // mant in +-[0.5, 1)
    return std::copysign(std::exp(std::log(std::abs(mant)) + double(exp2) * M_LN2 + log_scale),
                         mant);
}

}  // namespace

double bs_element(int n, int k, int l) {
    if (n < 0 || k < 0 || k > n || l < 0 || l > n)
        throw std::invalid_argument("bs_element: indices out of range");
    mpz_class sum = 0, term, b1, b2;
    for (int q = std::max(0, k - (n - l)); q <= std::min(k, l); ++q) {
        mpz_bin_uiui(b1.get_mpz_t(), unsigned(l), unsigned(q));
        mpz_bin_uiui(b2.get_mpz_t(), unsigned(n - l), unsigned(k - q));
        term = b1 * b2;
        if ((l + q) & 1)
            sum -= term;
        else
            sum += term;
    }
    const double log_scale = 0.5 * (std::lgamma(k + 1.0) + std::lgamma(n - k + 1.0) -
                                    std::lgamma(l + 1.0) - std::lgamma(n - l + 1.0)) -
                             0.5 * n * M_LN2;
    return scaled_to_double(sum, log_scale);
}

namespace detail {

struct BsLevelStepper::Impl {
    std::vector<mpz_class> cur, prev;  // S values, index l*(n+1)+k
    std::vector<double> lg;            // lgamma(i+1) cache
};

BsLevelStepper::BsLevelStepper() : impl_(std::make_shared<Impl>()) {}

void BsLevelStepper::step() {
    Impl& im = *impl_;
    const int n = n_ + 1;
    im.prev.swap(im.cur);
    // reuse mpz storage across levels; only newly grown slots allocate
    im.cur.resize(std::size_t(n + 1) * (n + 1));
    if (n == 0) {
        im.cur[0] = 1;
    } else {
        // l = 0 row is the Pascal row, built from the previous one
        const std::size_t wp = std::size_t(n);  // previous level row width
        im.cur[0] = 1;
        for (int k = 1; k < n; ++k)
            mpz_add(im.cur[std::size_t(k)].get_mpz_t(), im.prev[std::size_t(k - 1)].get_mpz_t(),
                    im.prev[std::size_t(k)].get_mpz_t());
        im.cur[std::size_t(n)] = 1;
#pragma omp parallel for schedule(static) if (n > 128)
        for (int l = 1; l <= n; ++l) {
            mpz_class* row = &im.cur[std::size_t(l) * (n + 1)];
            const mpz_class* p = &im.prev[std::size_t(l - 1) * wp];
            mpz_neg(row[0].get_mpz_t(), p[0].get_mpz_t());
            for (int k = 1; k < n; ++k)
                mpz_sub(row[k].get_mpz_t(), p[k - 1].get_mpz_t(), p[k].get_mpz_t());
            row[n] = p[n - 1];
        }
    }
    if (int(im.lg.size()) <= n + 1) {
        std::size_t old = im.lg.size();
        im.lg.resize(std::size_t(n + 2));
        for (std::size_t i = old; i < im.lg.size(); ++i) im.lg[i] = std::lgamma(double(i) + 1.0);
    }
    ++n_;
}

double BsLevelStepper::emit(std::vector<double>& out) const {
    const Impl& im = *impl_;
    const int n = n_;
    out.assign(std::size_t(n + 1) * (n + 1), 0.0);
    double defect = 0.0;
#pragma omp parallel for schedule(static) reduction(max : defect) if (n > 128)
    for (int l = 0; l <= n; ++l) {
        const double base = -0.5 * n * M_LN2 - 0.5 * (im.lg[std::size_t(l)] + im.lg[std::size_t(n - l)]);
        double rownorm = 0.0;
        for (int k = 0; k <= n; ++k) {
            const mpz_class& s = im.cur[std::size_t(l) * (n + 1) + k];
            double v = 0.0;
            if (s != 0)
                v = scaled_to_double(s, base + 0.5 * (im.lg[std::size_t(k)] + im.lg[std::size_t(n - k)]));
            out[std::size_t(l) * (n + 1) + k] = v;
            rownorm += v * v;
        }
        defect = std::max(defect, std::abs(rownorm - 1.0));
    }
    return defect;
}

}  // namespace detail

void BsElementTable::ensure(int n_max) {
    if (n_max <= max_level()) return;
    const int old_max = max_level();
    // replay the recurrence from scratch; already-built levels are kept
    detail::BsLevelStepper stepper;
    std::vector<double> buf;
    levels_.reserve(std::size_t(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        stepper.step();
        if (n <= old_max) continue;
        double d = stepper.emit(buf);
        unitarity_defect_ = std::max(unitarity_defect_, d);
        levels_.push_back(std::move(buf));
    }
}

namespace {

template <class State, class Expand>
State transform_generic(const State& s, BsElementTable& table, Expand&& expand) {
    if (s.frame() != Frame::PathsAB)
        throw std::invalid_argument("bs_transform: input must be in frame PathsAB");
    int need = 0;
    for (const auto& [k, a] : s.entries()) {
        OccupationTuple t = OccupationTuple::unpack(k & ((std::uint64_t(1) << 56) - 1));
        need = std::max({need, t.total_sigma_minus(), t.total_sigma_plus()});
    }
    table.ensure(need);
    State out(Frame::PathsCD);
    expand(s, table, out);
    out.prune();
    return out;
}

}  // namespace

PhotonVector bs_transform(const PhotonVector& s, BsElementTable& table) {
    return transform_generic(s, table, [](const PhotonVector& in, const BsElementTable& tab,
                                          PhotonVector& out) {
        for (const auto& [key, amp] : in.entries()) {
            auto t = OccupationTuple::unpack(key);
            const int nm = t.total_sigma_minus(), np = t.total_sigma_plus();
            const double* Em = tab.level(nm);
            const double* Ep = tab.level(np);
            for (int km = 0; km <= nm; ++km) {
                const double em = Em[std::size_t(t.m_minus) * (nm + 1) + km];
                if (em == 0.0) continue;
                for (int kp = 0; kp <= np; ++kp) {
                    const double ep = Ep[std::size_t(t.m_plus) * (np + 1) + kp];
                    if (ep == 0.0) continue;
                    OccupationTuple o;
                    o.m_minus = std::uint16_t(km);
                    o.m_plus = std::uint16_t(kp);
                    o.mt_minus = std::uint16_t(nm - km);
                    o.mt_plus = std::uint16_t(np - kp);
                    out.add(o, amp * (em * ep));
                }
            }
        }
    });
}

JointState bs_transform(const JointState& s, BsElementTable& table) {
    return transform_generic(s, table, [](const JointState& in, const BsElementTable& tab,
                                          JointState& out) {
        for (const auto& [key, amp] : in.entries()) {
            DotLevel l1, l2;
            OccupationTuple t;
            JointState::unkey(key, l1, l2, t);
            const int nm = t.total_sigma_minus(), np = t.total_sigma_plus();
            const double* Em = tab.level(nm);
            const double* Ep = tab.level(np);
            for (int km = 0; km <= nm; ++km) {
                const double em = Em[std::size_t(t.m_minus) * (nm + 1) + km];
                if (em == 0.0) continue;
                for (int kp = 0; kp <= np; ++kp) {
                    const double ep = Ep[std::size_t(t.m_plus) * (np + 1) + kp];
                    if (ep == 0.0) continue;
                    OccupationTuple o;
                    o.m_minus = std::uint16_t(km);
                    o.m_plus = std::uint16_t(kp);
                    o.mt_minus = std::uint16_t(nm - km);
                    o.mt_plus = std::uint16_t(np - kp);
                    out.add(l1, l2, o, amp * (em * ep));
                }
            }
        }
    });
}

PhotonVector project_count(const PhotonVector& s, int n1, int n2) {
    if (n1 < 0 || n2 < 0) throw std::invalid_argument("project_count: negative count");
    PhotonVector out(s.frame());
    for (const auto& [key, amp] : s.entries()) {
        auto t = OccupationTuple::unpack(key);
        if (t.total_path1() == n1 && t.total_path2() == n2) out.set(t, amp);
    }
    return out;
}

JointState project_count(const JointState& s, int n1, int n2) {
    if (n1 < 0 || n2 < 0) throw std::invalid_argument("project_count: negative count");
    JointState out(s.frame());
    for (const auto& [key, amp] : s.entries()) {
        DotLevel l1, l2;
        OccupationTuple t;
        JointState::unkey(key, l1, l2, t);
        if (t.total_path1() == n1 && t.total_path2() == n2) out.add(l1, l2, t, amp);
    }
    return out;
}

double outcome_probability(const PhotonVector& s, int n1, int n2) {
    return project_count(s, n1, n2).norm2();
}

double outcome_probability(const JointState& s, int n1, int n2) {
    return project_count(s, n1, n2).norm2();
}

}  // namespace herald
