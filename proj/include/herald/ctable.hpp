#ifndef HERALD_CTABLE_HPP
#define HERALD_CTABLE_HPP

#include <string>
#include <utility>
#include <vector>

namespace herald {

// Time-average coefficients C(n1,n2) of the odd-odd outcome probabilities,
// for n3 = (n1+n2)/2 up to n3_max. C(n1,n2) = C(n2,n1) >= 0, and the row sums
// obey sum_{n1 odd} C(n1, 2 n3 - n1) = n3/16 + (1-(-1)^n3)/64.
//
// The build walks the beam-splitter element recurrence one level at a time
// and reduces each level into one coefficient row; rows parallelize over n1
// (per-slot writes, so results are identical for any thread count). The
// serial path is kept as a reference for the parallel kernel.
class CCoefficientTable {
  public:
    static constexpr int kFormatVersion = 1;

    static CCoefficientTable build(int n3_max, bool parallel = true);

    int n3_max() const { return n3_max_; }

    // n1, n2 odd >= 1 with (n1+n2)/2 <= n3_max.
    double c(int n1, int n2) const;

    // sum over odd n1 of C(n1, 2 n3 - n1), from the stored row
    double row_sum(int n3) const;
    static double d_closed(int n3);

    // standard deviation of n1 under the normalized row distribution
    double sigma(int n3) const;
    // least-squares affine fit sigma(n3) ~ alpha n3 + beta over [lo, hi]
    std::pair<double, double> fit_sigma(int lo, int hi) const;

    void save_csv(const std::string& path) const;
    static CCoefficientTable load_csv(const std::string& path);

  private:
    int n3_max_ = 0;
    // rows_[n3-1]: C(n1, 2 n3 - n1) for odd n1 <= n3, index (n1-1)/2
    std::vector<std::vector<double>> rows_;
};

}  // namespace herald

#endif
