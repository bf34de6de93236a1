#ifndef HERALD_FOCK_HPP
#define HERALD_FOCK_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace herald {

using Complex = std::complex<double>;

// Amplitudes with magnitude below this are dropped when states are pruned.
inline constexpr double kPruneThreshold = 1e-14;

// Photon paths: a,b before the beam splitter, c,d after.
enum class Frame : std::uint8_t { PathsAB, PathsCD };

// Quantum dot levels. Zminus/Zplus form the spin sector, Tminus/Tplus the
// trion sector; sigma- light couples Zminus<->Tminus, sigma+ couples
// Zplus<->Tplus.
enum class DotLevel : std::uint8_t { Zminus = 0, Zplus = 1, Tminus = 2, Tplus = 3 };

inline bool is_trion(DotLevel l) { return l == DotLevel::Tminus || l == DotLevel::Tplus; }

// Photon counts (path1 sigma-, path1 sigma+, path2 sigma-, path2 sigma+).
// Path 1 is a (or c after the splitter), path 2 is b (or d).
struct OccupationTuple {
    std::uint16_t m_minus = 0;
    std::uint16_t m_plus = 0;
    std::uint16_t mt_minus = 0;
    std::uint16_t mt_plus = 0;

    int total() const { return m_minus + m_plus + mt_minus + mt_plus; }
    int total_path1() const { return m_minus + m_plus; }
    int total_path2() const { return mt_minus + mt_plus; }
    int total_sigma_minus() const { return m_minus + mt_minus; }
    int total_sigma_plus() const { return m_plus + mt_plus; }

    std::uint64_t pack() const {
        return (std::uint64_t(m_minus) << 42) | (std::uint64_t(m_plus) << 28) |
               (std::uint64_t(mt_minus) << 14) | std::uint64_t(mt_plus);
    }
    static OccupationTuple unpack(std::uint64_t key) {
        OccupationTuple t;
        t.m_minus = std::uint16_t((key >> 42) & 0x3fff);
        t.m_plus = std::uint16_t((key >> 28) & 0x3fff);
        t.mt_minus = std::uint16_t((key >> 14) & 0x3fff);
        t.mt_plus = std::uint16_t(key & 0x3fff);
        return t;
    }
    bool operator==(const OccupationTuple&) const = default;
};

// Sparse photon state: occupation tuple -> complex amplitude.
class PhotonVector {
  public:
    explicit PhotonVector(Frame frame) : frame_(frame) {}

    Frame frame() const { return frame_; }
    std::size_t size() const { return amps_.size(); }
    bool empty() const { return amps_.empty(); }

    void add(const OccupationTuple& t, Complex a) {
        if (a == Complex{}) return;
        amps_[t.pack()] += a;
    }
    void set(const OccupationTuple& t, Complex a) { amps_[t.pack()] = a; }

    Complex amplitude(const OccupationTuple& t) const {
        auto it = amps_.find(t.pack());
        return it == amps_.end() ? Complex{} : it->second;
    }

    double norm2() const;
    void prune(double threshold = kPruneThreshold);
    void scale(Complex c);

    const std::unordered_map<std::uint64_t, Complex>& entries() const { return amps_; }
    std::unordered_map<std::uint64_t, Complex>& entries() { return amps_; }
    // Entries ordered by packed key, for deterministic output.
    std::vector<std::pair<std::uint64_t, Complex>> sorted_entries() const;

  private:
    Frame frame_;
    std::unordered_map<std::uint64_t, Complex> amps_;
};

// Sparse two-dot + photon state: (level1, level2, tuple) -> amplitude.
class JointState {
  public:
    explicit JointState(Frame frame) : frame_(frame) {}

    Frame frame() const { return frame_; }
    std::size_t size() const { return amps_.size(); }
    bool empty() const { return amps_.empty(); }

    static std::uint64_t key(DotLevel l1, DotLevel l2, const OccupationTuple& t) {
        return (std::uint64_t(l1) << 60) | (std::uint64_t(l2) << 58) | t.pack();
    }
    static void unkey(std::uint64_t k, DotLevel& l1, DotLevel& l2, OccupationTuple& t) {
        l1 = DotLevel((k >> 60) & 3);
        l2 = DotLevel((k >> 58) & 3);
        t = OccupationTuple::unpack(k & ((std::uint64_t(1) << 56) - 1));
    }

    void add(DotLevel l1, DotLevel l2, const OccupationTuple& t, Complex a) {
        if (a == Complex{}) return;
        amps_[key(l1, l2, t)] += a;
    }
    Complex amplitude(DotLevel l1, DotLevel l2, const OccupationTuple& t) const {
        auto it = amps_.find(key(l1, l2, t));
        return it == amps_.end() ? Complex{} : it->second;
    }

    double norm2() const;
    void prune(double threshold = kPruneThreshold);
    void scale(Complex c);

    const std::unordered_map<std::uint64_t, Complex>& entries() const { return amps_; }
    std::unordered_map<std::uint64_t, Complex>& entries() { return amps_; }
    std::vector<std::pair<std::uint64_t, Complex>> sorted_entries() const;

  private:
    Frame frame_;
    std::unordered_map<std::uint64_t, Complex> amps_;
};

// Conjugate-linear in the first argument. Frame mismatch is a usage error.
Complex inner_product(const PhotonVector& x, const PhotonVector& y);
Complex inner_product(const JointState& x, const JointState& y);

// Sub-vector whose dot-level pairs satisfy the predicate.
JointState sector_filter(const JointState& s,
                         const std::function<bool(DotLevel, DotLevel)>& keep);

// Probability weight of the |m,m> terms discarded beyond n_max in the
// two-mode squeezed state with weight lambda: lambda^{2(n_max+1)}.
double truncation_tail_bound(double lambda, int n_max);

// Smallest n_max whose tail bound is below eps.
int truncation_level(double lambda, double eps = 1e-12);

}  // namespace herald

#endif
