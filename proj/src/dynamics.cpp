#include "herald/dynamics.hpp"

#include <cmath>

namespace herald {

DotState jc_evolve(const DotParams& p, double t, int n_max) {
    if (t < 0.0) throw std::domain_error("jc_evolve: t must be >= 0");
    if (p.lambda < 0.0 || p.lambda >= 1.0)
        throw std::domain_error("jc_evolve: lambda must be in [0,1)");
    if (p.g <= 0.0) throw std::domain_error("jc_evolve: g must be > 0");

    DotState out;
    const double c0 = std::sqrt(1.0 - p.lambda * p.lambda);
    double w = c0;  // sqrt(1-lambda^2) lambda^m
    for (int m = 0; m <= n_max; ++m) {
        const double phase = p.g * std::sqrt(double(m)) * t;
        const double cosw = std::cos(phase);
        const double sinw = std::sin(phase);
        // sigma- channel: |z-,(m,m)> -> cos|z-,(m,m)> - i sin|t-,(m-1,m)>
        out.add(DotLevel::Zminus, m, m, p.initial_spin[0] * (w * cosw));
        if (m > 0)
            out.add(DotLevel::Tminus, m - 1, m, p.initial_spin[0] * Complex(0.0, -w * sinw));
        // sigma+ channel: |z+,(m,m)> -> cos|z+,(m,m)> - i sin|t+,(m,m-1)>
        out.add(DotLevel::Zplus, m, m, p.initial_spin[1] * (w * cosw));
        if (m > 0)
            out.add(DotLevel::Tplus, m, m - 1, p.initial_spin[1] * Complex(0.0, -w * sinw));
        w *= p.lambda;
    }
    return out;
}

JointState joint_pre_splitter(const DotParams& p1, const DotParams& p2, double t, int n_max) {
    DotState a = jc_evolve(p1, t, n_max);
    DotState b = jc_evolve(p2, t, n_max);
    JointState out(Frame::PathsAB);
    for (const auto& [ka, aa] : a.entries()) {
        const DotLevel l1 = DotLevel((ka >> 32) & 3);
        const int am = int((ka >> 16) & 0xffff), ap = int(ka & 0xffff);
        for (const auto& [kb, ab] : b.entries()) {
            const DotLevel l2 = DotLevel((kb >> 32) & 3);
            const int bm = int((kb >> 16) & 0xffff), bp = int(kb & 0xffff);
            OccupationTuple tup;
            tup.m_minus = std::uint16_t(am);
            tup.m_plus = std::uint16_t(ap);
            tup.mt_minus = std::uint16_t(bm);
            tup.mt_plus = std::uint16_t(bp);
            out.add(l1, l2, tup, aa * ab);
        }
    }
    return out;
}

JointState attach_free_phase(const JointState& s, double omega0, double t) {
    JointState out(s.frame());
    for (const auto& [k, a] : s.entries()) {
        DotLevel l1, l2;
        OccupationTuple tup;
        JointState::unkey(k, l1, l2, tup);
        const double halves = (is_trion(l1) ? 0.5 : -0.5) + (is_trion(l2) ? 0.5 : -0.5);
        const double e0 = omega0 * (tup.total() + halves);
        out.add(l1, l2, tup, a * std::polar(1.0, -e0 * t));
    }
    return out;
}

}  // namespace herald
