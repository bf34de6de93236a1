#include "herald/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>

namespace herald {

namespace {

int sector_index(DotLevel l, SectorBasis basis) {
    switch (l) {
        case DotLevel::Zminus: return basis == SectorBasis::Spin ? 0 : -1;
        case DotLevel::Zplus: return basis == SectorBasis::Spin ? 1 : -1;
        case DotLevel::Tminus: return basis == SectorBasis::Trion ? 0 : -1;
        case DotLevel::Tplus: return basis == SectorBasis::Trion ? 1 : -1;
    }
    return -1;
}

}  // namespace

QubitPairDensity reduce_density(const JointState& s, SectorBasis basis) {
    // gather per-tuple 4-vectors of sector amplitudes, then sum outer products
    std::unordered_map<std::uint64_t, std::array<Complex, 4>> cols;
    for (const auto& [k, a] : s.entries()) {
        DotLevel l1, l2;
        OccupationTuple t;
        JointState::unkey(k, l1, l2, t);
        const int i1 = sector_index(l1, basis), i2 = sector_index(l2, basis);
        if (i1 < 0 || i2 < 0) continue;
        cols[t.pack()][std::size_t(2 * i1 + i2)] += a;
    }
    QubitPairDensity out;
    out.basis = basis;
    for (const auto& [tk, v] : cols)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) out.rho(i, j) += v[std::size_t(i)] * std::conj(v[std::size_t(j)]);
    out.trace_weight = out.rho.trace().real();
    if (out.trace_weight > 0.0) out.rho /= out.trace_weight;
    return out;
}

double concurrence(const Eigen::Matrix4cd& rho_in, double tol) {
    Eigen::Matrix4cd rho = rho_in;
    const double tr = rho.trace().real();
    if (tr <= 0.0) throw std::invalid_argument("concurrence: zero-trace density");
    rho /= tr;
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol)
        throw std::invalid_argument("concurrence: density not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> herm(rho);
    if (herm.eigenvalues().minCoeff() < -tol)
        throw std::invalid_argument("concurrence: density not positive semidefinite");

    // sigma_y x sigma_y in the basis (--, -+, +-, ++): antidiagonal (-1,1,1,-1)
    Eigen::Matrix4cd F = Eigen::Matrix4cd::Zero();
    F(0, 3) = -1;
    F(1, 2) = 1;
    F(2, 1) = 1;
    F(3, 0) = -1;
    // The Wootters lambdas are the singular values of sqrt(rho) F
    // conj(sqrt(rho)): quadratic in sqrt(rho), so eigenvalue noise of
    // near-pure densities enters squared instead of under a square root.
    Eigen::Matrix4cd sq = Eigen::Matrix4cd::Zero();
    {
        const auto& U = herm.eigenvectors();
        Eigen::Vector4d ev = herm.eigenvalues();
        for (int i = 0; i < 4; ++i)
            sq += std::sqrt(std::max(0.0, ev(i))) * U.col(i) * U.col(i).adjoint();
    }
    const Eigen::Matrix4cd B = sq * F * sq.conjugate();
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(B);
    const auto& s = svd.singularValues();
    return std::max(0.0, s(0) - s(1) - s(2) - s(3));
}

Eigen::Vector4cd bell_psi_minus() {
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    v(1) = Complex(M_SQRT1_2);
    v(2) = Complex(-M_SQRT1_2);
    return v;
}

double fidelity_to_bell(const JointState& post_measurement) {
    QubitPairDensity d = reduce_density(post_measurement, SectorBasis::Trion);
    if (d.trace_weight <= 0.0)
        throw std::invalid_argument("fidelity_to_bell: empty trion sector");
    const Eigen::Vector4cd psi = bell_psi_minus();
    return (psi.adjoint() * d.rho * psi)(0).real();
}

double fidelity_to_bell(const OutcomeResult& r) {
    const double tr = r.trion_density.trace().real();
    if (tr <= 0.0) throw std::invalid_argument("fidelity_to_bell: empty trion sector");
    const Eigen::Vector4cd psi = bell_psi_minus();
    return (psi.adjoint() * r.trion_density * psi)(0).real() / tr;
}

EvenEvenReport even_even_check(int n1, int n2, double m_bar, double g_t,
                               BsElementTable& table) {
    if ((n1 & 1) || (n2 & 1))
        throw std::invalid_argument("even_even_check: n1 and n2 must be even");
    DotParams p;
    p.g = 1.0;
    p.lambda = lambda_from_mean(m_bar);
    table.ensure((n1 + n2) / 2 + 1);
    const OutcomeResult r = heralded_outcome(p, p, g_t, n1, n2, table);
    EvenEvenReport rep;
    rep.q0 = r.spin_spin_weight;
    // identical dots: |x+> amplitudes 1/sqrt(2) each, so the class weights
    // (t-,t~-) and (t-,t~+) carry the 1/4 spin factors already
    rep.q_updown = r.trion_density(0, 0).real();
    rep.q_plus = r.trion_density(1, 1).real();
    rep.inequality_holds = rep.q_updown >= rep.q_plus - 1e-12;
    return rep;
}

MismatchResult mismatch_fidelity_study(double dlam_rel, double dg_rel, double m_bar,
                                       std::span<const double> t_grid, BsElementTable& table,
                                       double coverage_eps) {
    if (dlam_rel < 0.0 || dg_rel < 0.0)
        throw std::domain_error("mismatch_fidelity_study: deviations must be >= 0");
    if (t_grid.empty()) throw std::invalid_argument("mismatch_fidelity_study: empty t grid");
    DotParams p1, p2;
    p1.g = 1.0;
    p1.lambda = lambda_from_mean(m_bar);
    p2.g = p1.g * (1.0 + dg_rel);
    p2.lambda = p1.lambda * (1.0 + dlam_rel);
    if (p2.lambda >= 1.0)
        throw std::domain_error("mismatch_fidelity_study: mismatched lambda leaves [0,1)");

    double wsum = 0.0, fsum = 0.0;
    for (double t : t_grid) {
        auto res = outcome_scan_covering(p1, p2, t, coverage_eps, table);
        for (const OutcomeResult& r : res) {
            if (!(r.n1 & 1) || !(r.n2 & 1)) continue;
            const double tr = r.trion_density.trace().real();
            if (tr <= 0.0) continue;
            fsum += tr * fidelity_to_bell(r);
            wsum += tr;
        }
    }
    MismatchResult out;
    if (wsum > 0.0) out.expected_fidelity = fsum / wsum;
    out.heralding_probability = wsum / double(t_grid.size());
    return out;
}

}  // namespace herald
