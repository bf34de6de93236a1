#include "herald/gaussian.hpp"

#include <cmath>

namespace herald {

EprParams EprParams::from_lambda(double lam) {
    if (lam < 0.0 || lam >= 1.0)
        throw std::domain_error("EprParams: lambda must be in [0,1)");
    return {lam};
}

EprParams EprParams::from_mean(double m_bar) { return {lambda_from_mean(m_bar)}; }

EprParams EprParams::from_squeezing(double r) {
    if (r < 0.0) throw std::domain_error("EprParams: squeezing parameter must be >= 0");
    return {std::tanh(r)};
}

double lambda_from_mean(double m_bar) {
    if (m_bar < 0.0) throw std::domain_error("lambda_from_mean: m_bar must be >= 0");
    return std::sqrt(m_bar / (m_bar + 1.0));
}

double mean_from_lambda(double lambda) {
    if (lambda < 0.0 || lambda >= 1.0)
        throw std::domain_error("mean_from_lambda: lambda must be in [0,1)");
    return lambda * lambda / (1.0 - lambda * lambda);
}

PhotonVector epr_state(const EprParams& p, int n_max) {
    if (p.lambda < 0.0 || p.lambda >= 1.0)
        throw std::domain_error("epr_state: lambda must be in [0,1)");
    if (n_max < 0) throw std::domain_error("epr_state: n_max must be >= 0");
    PhotonVector v(Frame::PathsAB);
    const double c = std::sqrt(1.0 - p.lambda * p.lambda);
    double w = c;
    for (int m = 0; m <= n_max; ++m) {
        OccupationTuple t;
        t.m_minus = std::uint16_t(m);
        t.m_plus = std::uint16_t(m);
        if (w != 0.0) v.set(t, w);
        w *= p.lambda;
    }
    return v;
}

PhotonMoments photon_number_moments(const EprParams& p) {
    const double m = p.mean_photons();
    return {m, m * m + m};
}

PhotonMoments photon_number_moments_summed(const EprParams& p, int n_max) {
    PhotonVector v = epr_state(p, n_max);
    double n2 = v.norm2();
    double e1 = 0.0, e2 = 0.0;
    for (const auto& [k, a] : v.entries()) {
        auto t = OccupationTuple::unpack(k);
        const double w = std::norm(a);
        e1 += w * t.m_minus;
        e2 += w * double(t.m_minus) * double(t.m_minus);
    }
    e1 /= n2;
    e2 /= n2;
    return {e1, e2 - e1 * e1};
}

CovarianceMatrix standard_covariance(double r) {
    if (r < 0.0) throw std::domain_error("standard_covariance: r must be >= 0");
    const double nu = std::cosh(2.0 * r);
    const double h = std::sqrt(std::max(nu * nu - 1.0, 0.0));
    CovarianceMatrix V = CovarianceMatrix::Zero();
    V(0, 0) = V(1, 1) = V(2, 2) = V(3, 3) = nu;
    V(0, 2) = V(2, 0) = h;
    V(1, 3) = V(3, 1) = -h;
    return 0.5 * V;
}

GaussianReport validate_gaussian(const CovarianceMatrix& V, double tol) {
    if ((V - V.transpose()).cwiseAbs().maxCoeff() > tol)
        throw std::invalid_argument("validate_gaussian: covariance matrix not symmetric");

    GaussianReport rep;
    rep.pure = std::abs(V.determinant() - 1.0 / 16.0) <= tol;

    // Uncertainty relation: V + (i/2) Omega >= 0 as a Hermitian matrix.
    Eigen::Matrix4d Omega = Eigen::Matrix4d::Zero();
    Omega(0, 1) = 1;
    Omega(1, 0) = -1;
    Omega(2, 3) = 1;
    Omega(3, 2) = -1;
    Eigen::Matrix4cd H = V.cast<Complex>() + Complex(0.0, 0.5) * Omega.cast<Complex>();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(H);
    rep.physical = es.eigenvalues().minCoeff() >= -tol;

    // Standard two-mode squeezed pattern: equal diagonal nu/2, couplings
    // +-sqrt(nu^2-1)/2 at (0,2)/(1,3), zero elsewhere.
    const double nu = 2.0 * V(0, 0);
    bool form = nu >= 1.0 - tol;
    if (form) {
        const double h = 0.5 * std::sqrt(std::max(nu * nu - 1.0, 0.0));
        CovarianceMatrix ref = CovarianceMatrix::Zero();
        ref(0, 0) = ref(1, 1) = ref(2, 2) = ref(3, 3) = 0.5 * nu;
        ref(0, 2) = ref(2, 0) = h;
        ref(1, 3) = ref(3, 1) = -h;
        form = (V - ref).cwiseAbs().maxCoeff() <= tol;
    }
    rep.epr_form = form;
    return rep;
}

}  // namespace herald
