#ifndef HERALD_HERALDING_HPP
#define HERALD_HERALDING_HPP

#include <Eigen/Dense>
#include <vector>

#include "herald/dynamics.hpp"
#include "herald/optics.hpp"

namespace herald {

// Everything the post-selection analysis needs about one detector outcome.
// trion_density is unnormalized, basis order (t-,t~-), (t-,t~+), (t+,t~-),
// (t+,t~+); its trace plus spin_spin_weight plus mixed_weight equals
// probability.
struct OutcomeResult {
    int n1 = 0, n2 = 0;
    double probability = 0.0;
    double spin_spin_weight = 0.0;  // both dots in the spin sector
    double mixed_weight = 0.0;      // exactly one dot excited
    Eigen::Matrix4cd trion_density = Eigen::Matrix4cd::Zero();
};

// Exact amplitudes of outcome (n1, n2) for the full pipeline (evolution,
// beam splitter, photon-number projection) without building the global
// state: per dot-sector class the projected amplitude is a finite sum over
// one Fock index. Supports distinct (g, lambda) and initial spins per dot.
// The element table must already be built to level (n1+n2)/2 + 1.
OutcomeResult heralded_outcome(const DotParams& p1, const DotParams& p2, double t, int n1,
                               int n2, const BsElementTable& table);

// Outcomes (n1, n2) with n1 + n2 <= total_max.
std::vector<std::pair<int, int>> outcome_grid(int total_max);

// Evaluate a batch of outcomes, optionally in parallel (one slot per
// outcome, deterministic for any thread count).
std::vector<OutcomeResult> outcome_scan(const DotParams& p1, const DotParams& p2, double t,
                                        const std::vector<std::pair<int, int>>& outcomes,
                                        BsElementTable& table, bool parallel = true);

// Enumerate outcomes in order of total photon number until the summed
// probability reaches 1 - eps, so every skipped outcome has probability
// below eps. Probabilities sum to 1 up to drive truncation, which makes the
// stopping rule sound.
std::vector<OutcomeResult> outcome_scan_covering(const DotParams& p1, const DotParams& p2,
                                                 double t, double eps, BsElementTable& table,
                                                 bool parallel = true);

}  // namespace herald

#endif
