#ifndef HERALD_TRIG_HPP
#define HERALD_TRIG_HPP

#include <span>

namespace herald {

// One factor sin(sqrt(n) g t) or cos(sqrt(n) g t).
struct TrigFactor {
    bool is_sin;
    int radicand;  // n >= 0
};

// Exact long-time mean of a product of such factors. Expands the product
// into exponentials and keeps the resonant (zero total frequency) terms;
// whether a signed combination of square roots vanishes is decided exactly
// through square-free decomposition of the radicands.
double trig_product_mean(std::span<const TrigFactor> factors);

// Square-free kernel f of n = c^2 f (f = 0 for n = 0).
int square_free_kernel(int n);

}  // namespace herald

#endif
