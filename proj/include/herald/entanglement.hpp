#ifndef HERALD_ENTANGLEMENT_HPP
#define HERALD_ENTANGLEMENT_HPP

#include <Eigen/Dense>
#include <span>

#include "herald/heralding.hpp"

namespace herald {

enum class SectorBasis { Spin, Trion };

// 4x4 two-qubit density over the chosen two-level sector of each dot,
// obtained by tracing the photons out of an (unnormalized) post-measurement
// state. trace_weight is the sector weight before normalization.
struct QubitPairDensity {
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();  // normalized when trace_weight > 0
    double trace_weight = 0.0;
    SectorBasis basis = SectorBasis::Trion;
};

QubitPairDensity reduce_density(const JointState& s, SectorBasis basis);

// Wootters concurrence of a two-qubit density matrix (input is normalized
// internally; far-from-PSD input is a usage error).
double concurrence(const Eigen::Matrix4cd& rho, double tol = 1e-9);

// |Psi-> = (|t-,t~+> - |t+,t~->)/sqrt(2) in the trion basis ordering
// (t-,t~-), (t-,t~+), (t+,t~-), (t+,t~+).
Eigen::Vector4cd bell_psi_minus();

// <Psi-| rho_trion |Psi-> of the normalized trion-sector density.
double fidelity_to_bell(const JointState& post_measurement);
double fidelity_to_bell(const OutcomeResult& r);

struct EvenEvenReport {
    double q0 = 0.0;        // spin-spin weight
    double q_updown = 0.0;  // (t-,t~-) weight (= (t+,t~+))
    double q_plus = 0.0;    // (t-,t~+) weight (= (t+,t~-))
    bool inequality_holds = false;  // q_updown >= q_plus - 1e-12
};

// Sector weights of an even-even outcome of the identical-dot pipeline.
EvenEvenReport even_even_check(int n1, int n2, double m_bar, double g_t,
                               BsElementTable& table);

struct MismatchResult {
    double expected_fidelity = 0.0;   // heralding-probability-weighted mean
    double heralding_probability = 0.0;  // mean odd-odd probability over the grid
};

// Robustness of the heralded state against dot parameter mismatch: dot 2
// runs at lambda (1 + dlam_rel), g (1 + dg_rel). Every odd-odd outcome above
// the coverage threshold contributes with its probability as weight.
MismatchResult mismatch_fidelity_study(double dlam_rel, double dg_rel, double m_bar,
                                       std::span<const double> t_grid, BsElementTable& table,
                                       double coverage_eps = 1e-9);

}  // namespace herald

#endif
