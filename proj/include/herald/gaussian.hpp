#ifndef HERALD_GAUSSIAN_HPP
#define HERALD_GAUSSIAN_HPP

#include <Eigen/Dense>

#include "herald/fock.hpp"

namespace herald {

// Two-mode squeezed vacuum parameters. lambda = tanh(r),
// mean photons per mode m_bar = lambda^2/(1-lambda^2).
struct EprParams {
    double lambda = 0.0;

    static EprParams from_lambda(double lam);
    static EprParams from_mean(double m_bar);
    static EprParams from_squeezing(double r);

    double squeezing() const { return std::atanh(lambda); }
    double mean_photons() const { return lambda * lambda / (1.0 - lambda * lambda); }
};

double lambda_from_mean(double m_bar);
double mean_from_lambda(double lambda);

// |chi(0)> = sqrt(1-lambda^2) sum_m lambda^m |m,m> on one path (modes
// sigma-/sigma+ of path 1; path-2 counts stay zero). Frame PathsAB.
PhotonVector epr_state(const EprParams& p, int n_max);

struct PhotonMoments {
    double mean;
    double variance;
};

// Per-mode photon number mean and variance, closed form (m, m^2 + m).
PhotonMoments photon_number_moments(const EprParams& p);
// Same moments by direct summation over the truncated state.
PhotonMoments photon_number_moments_summed(const EprParams& p, int n_max);

// Real symmetric 4x4 covariance, phase-space order (q1,p1,q2,p2), hbar = 1.
using CovarianceMatrix = Eigen::Matrix4d;

// Standard-form covariance of the two-mode squeezed vacuum:
// diag nu/2 with +-sqrt(nu^2-1)/2 couplings, nu = cosh(2r).
CovarianceMatrix standard_covariance(double r);

struct GaussianReport {
    bool pure = false;      // det V = 1/16
    bool physical = false;  // V + (i/2) Omega >= 0
    bool epr_form = false;  // matches the standard two-mode squeezed form
};

GaussianReport validate_gaussian(const CovarianceMatrix& V, double tol = 1e-10);

}  // namespace herald

#endif
