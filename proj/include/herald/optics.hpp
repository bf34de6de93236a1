#ifndef HERALD_OPTICS_HPP
#define HERALD_OPTICS_HPP

#include <memory>
#include <vector>

#include "herald/fock.hpp"

namespace herald {

// One-mode 50/50 beam-splitter matrix element <k, n-k| U |l, n-l> with the
// convention c = (a+b)/sqrt(2), d = (b-a)/sqrt(2): the first slot is path a
// in / path c out. The alternating integer sum is evaluated exactly in
// arbitrary precision and combined with factorial ratios in log space, so the
// value is correct to double rounding for any n the integer arithmetic can
// hold (tested to n = 600).
double bs_element(int n, int k, int l);

// Element tables for n = 0..max_level, built by the exact integer recurrence
//   S(n,k,l) = S(n-1,k-1,l-1) - S(n-1,k,l-1),  S(n,k,0) = binomial(n,k),
// one level at a time, emitting doubles per level. Immutable after ensure();
// concurrent reads are safe, growth is not.
class BsElementTable {
  public:
    void ensure(int n_max);
    int max_level() const { return int(levels_.size()) - 1; }

    // Row-major: level(n)[l*(n+1) + k].
    const double* level(int n) const { return levels_[std::size_t(n)].data(); }
    double element(int n, int k, int l) const { return levels_[std::size_t(n)][std::size_t(l) * (n + 1) + k]; }

    // Worst per-row unit-norm defect seen while building (unitarity audit).
    double unitarity_defect() const { return unitarity_defect_; }

  private:
    std::vector<std::vector<double>> levels_;
    double unitarity_defect_ = 0.0;
};

// 50/50 beam splitter on a PathsAB state; output is in PathsCD. Factorizes
// over the two polarizations; photon number per polarization is conserved.
PhotonVector bs_transform(const PhotonVector& s, BsElementTable& table);
JointState bs_transform(const JointState& s, BsElementTable& table);

// Keep the amplitudes with path-1 total n1 and path-2 total n2
// (polarization-summed). Projectors are orthogonal and complete.
PhotonVector project_count(const PhotonVector& s, int n1, int n2);
JointState project_count(const JointState& s, int n1, int n2);

double outcome_probability(const PhotonVector& s, int n1, int n2);
double outcome_probability(const JointState& s, int n1, int n2);

namespace detail {

// Streaming form of the exact level recurrence: advances one level per call
// and exposes the current level as doubles. Used by the coefficient-table
// builder, which cannot afford to retain every level.
class BsLevelStepper {
  public:
    BsLevelStepper();
    // Advance to level n (must be called with n = current+1).
    void step();
    int level() const { return n_; }
    // Emit doubles for the current level into out (size (n+1)^2, row-major
    // by l). Returns the worst row-norm defect of the level.
    double emit(std::vector<double>& out) const;

  private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
    int n_ = -1;
};

}  // namespace detail

}  // namespace herald

#endif
