#include "herald/trig.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

namespace herald {

int square_free_kernel(int n) {
    if (n < 0) throw std::invalid_argument("square_free_kernel: negative radicand");
    if (n == 0) return 0;
    int f = 1;
    for (int p = 2; p * p <= n; ++p) {
        int cnt = 0;
        while (n % p == 0) {
            n /= p;
            ++cnt;
        }
        if (cnt & 1) f *= p;
    }
    return f * n;
}

double trig_product_mean(std::span<const TrigFactor> factors) {
    const int m = int(factors.size());
    if (m == 0) return 1.0;
    if (m > 16) throw std::invalid_argument("trig_product_mean: too many factors");

    // Integer multiple of sqrt(radicand) for each factor, keyed square-free.
    std::vector<int> kernel(m), mult(m);
    for (int i = 0; i < m; ++i) {
        const int n = factors[i].radicand;
        const int f = square_free_kernel(n);
        kernel[i] = f;
        mult[i] = f == 0 ? 0 : int(std::lround(std::sqrt(double(n) / f)));
    }

    // sin x = (e^{ix} - e^{-ix})/(2i), cos x = (e^{ix} + e^{-ix})/2.
    // Sum the coefficients of the sign patterns whose total frequency is 0.
    std::complex<double> acc{};
    for (unsigned pat = 0; pat < (1u << m); ++pat) {
        std::map<int, long long> freq;
        std::complex<double> coef{1.0, 0.0};
        for (int i = 0; i < m; ++i) {
            const int sign = (pat >> i) & 1 ? -1 : 1;
            if (kernel[i] != 0) freq[kernel[i]] += sign * mult[i];
            if (factors[i].is_sin)
                coef *= std::complex<double>(0.0, -0.5 * sign);  // 1/(2i) * sign
            else
                coef *= 0.5;
        }
        bool resonant = true;
        for (const auto& [f, c] : freq)
            if (c != 0) {
                resonant = false;
                break;
            }
        if (resonant) acc += coef;
    }
    return acc.real();
}

}  // namespace herald
