#ifndef HERALD_DYNAMICS_HPP
#define HERALD_DYNAMICS_HPP

#include <array>

#include "herald/fock.hpp"
#include "herald/gaussian.hpp"

namespace herald {

// One driven dot. omega0 is bookkeeping only: the free-Hamiltonian phase is
// constant inside each Rabi pair, so it drops out of every probability
// (attach_free_phase exists to make that testable).
struct DotParams {
    double g = 1.0;       // coupling constant, rad/time
    double lambda = 0.0;  // squeeze weight of this dot's drive
    double omega0 = 0.0;  // resonance frequency, rad/time
    // Amplitudes on (|z->, |z+>); default |x+> = (|z-> + |z+>)/sqrt(2).
    std::array<Complex, 2> initial_spin = {Complex(M_SQRT1_2), Complex(M_SQRT1_2)};
};

// One dot tensor its two drive modes: (level, m_minus, m_plus) -> amplitude.
class DotState {
  public:
    static std::uint64_t key(DotLevel l, int m_minus, int m_plus) {
        return (std::uint64_t(l) << 32) | (std::uint64_t(m_minus) << 16) | std::uint64_t(m_plus);
    }
    void add(DotLevel l, int m_minus, int m_plus, Complex a) {
        if (a == Complex{}) return;
        amps_[key(l, m_minus, m_plus)] += a;
    }
    Complex amplitude(DotLevel l, int m_minus, int m_plus) const {
        auto it = amps_.find(key(l, m_minus, m_plus));
        return it == amps_.end() ? Complex{} : it->second;
    }
    double norm2() const {
        double s = 0.0;
        for (const auto& [k, a] : amps_) s += std::norm(a);
        return s;
    }
    const std::unordered_map<std::uint64_t, Complex>& entries() const { return amps_; }

  private:
    std::unordered_map<std::uint64_t, Complex> amps_;
};

// Resonant Jaynes-Cummings evolution of the EPR-driven dot, computed as
// independent two-level rotations per Fock level:
//   |z-,(m,m)> <-> |t-,(m-1,m)> and |z+,(m,m)> <-> |t+,(m,m-1)>,
// each at Rabi frequency g sqrt(m). Exactly unitary on the truncated span.
DotState jc_evolve(const DotParams& p, double t, int n_max);

// Tensor product of the two evolved dot states. Dot-2 photon counts map to
// the path-2 slots of the occupation tuple. Frame PathsAB.
JointState joint_pre_splitter(const DotParams& p1, const DotParams& p2, double t, int n_max);

// Multiply every basis amplitude by its free-evolution phase
// exp(-i E0 t), E0 = omega0 * photons + (omega0/2) * (trions - spins).
JointState attach_free_phase(const JointState& s, double omega0, double t);

}  // namespace herald

#endif
