#include <array>
#include <cmath>

#include "doctest.h"
#include "herald/trig.hpp"

using namespace herald;

TEST_CASE("square free kernels") {
    CHECK(square_free_kernel(0) == 0);
    CHECK(square_free_kernel(1) == 1);
    CHECK(square_free_kernel(4) == 1);
    CHECK(square_free_kernel(8) == 2);
    CHECK(square_free_kernel(12) == 3);
    CHECK(square_free_kernel(45) == 5);
    CHECK(square_free_kernel(97) == 97);
}

TEST_CASE("classic trig means") {
    using F = TrigFactor;
    std::array<F, 2> sin2 = {F{true, 2}, F{true, 2}};
    CHECK(trig_product_mean(sin2) == doctest::Approx(0.5));
    std::array<F, 2> cos2 = {F{false, 3}, F{false, 3}};
    CHECK(trig_product_mean(cos2) == doctest::Approx(0.5));
    std::array<F, 4> sin4 = {F{true, 5}, F{true, 5}, F{true, 5}, F{true, 5}};
    CHECK(trig_product_mean(sin4) == doctest::Approx(3.0 / 8.0));
    std::array<F, 2> cross = {F{true, 2}, F{true, 3}};
    CHECK(trig_product_mean(cross) == doctest::Approx(0.0));
    std::array<F, 2> sincos = {F{true, 2}, F{false, 2}};
    CHECK(trig_product_mean(sincos) == doctest::Approx(0.0));
    // sqrt(8) = 2 sqrt(2) resonates with two sqrt(2) factors:
    // <cos(2w) cos(w) cos(w)> with w = sqrt(2): cos(2w) = 2cos^2(w) - 1
    std::array<F, 3> res = {F{false, 8}, F{false, 2}, F{false, 2}};
    CHECK(trig_product_mean(res) == doctest::Approx(0.25));
    // cos(0) factors are inert
    std::array<F, 3> dc = {F{false, 0}, F{false, 7}, F{false, 7}};
    CHECK(trig_product_mean(dc) == doctest::Approx(0.5));
    std::array<F, 1> dc1 = {F{false, 0}};
    CHECK(trig_product_mean(dc1) == doctest::Approx(1.0));
    std::array<F, 1> s0 = {F{true, 0}};
    CHECK(trig_product_mean(s0) == doctest::Approx(0.0));
}

TEST_CASE("no accidental resonances among paired frequencies") {
    // For m + m' = mu + mu' = S with all four radicands nonzero, a signed
    // combination of the square roots vanishes only when {m,m'} = {mu,mu'}.
    for (int S = 2; S <= 9; ++S) {
        for (int m = 1; m < S; ++m) {
            for (int mu = 1; mu < S; ++mu) {
                const int mp = S - m, mup = S - mu;
                const bool same_pair = (mu == m) || (mu == mp);
                bool any_resonance = false;
                for (int signs = 0; signs < 8 && !any_resonance; ++signs) {
                    const double v = std::sqrt(double(m)) +
                                     ((signs & 1) ? 1 : -1) * std::sqrt(double(mp)) +
                                     ((signs & 2) ? 1 : -1) * std::sqrt(double(mu)) +
                                     ((signs & 4) ? 1 : -1) * std::sqrt(double(mup));
                    // exact zero test through square-free kernels
                    int coef[4][2] = {};
                    auto add = [&](int rad, int sgn) {
                        const int f = square_free_kernel(rad);
                        const int mult = int(std::lround(std::sqrt(double(rad) / f)));
                        for (auto& c : coef)
                            if (c[0] == f || c[0] == 0) {
                                c[0] = f;
                                c[1] += sgn * mult;
                                return;
                            }
                    };
                    add(m, 1);
                    add(mp, (signs & 1) ? 1 : -1);
                    add(mu, (signs & 2) ? 1 : -1);
                    add(mup, (signs & 4) ? 1 : -1);
                    bool zero = true;
                    for (auto& c : coef) zero = zero && (c[1] == 0);
                    if (zero) {
                        any_resonance = true;
                        CHECK(std::abs(v) < 1e-9);  // sanity on the float side
                    }
                }
                if (!same_pair) CHECK_FALSE(any_resonance);
                if (same_pair) CHECK(any_resonance);
            }
        }
    }
}
