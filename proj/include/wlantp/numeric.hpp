#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace wlantp {

// Compensated (Kahan) accumulator. Keeps truncation error of long sums
// at the level of a single rounding rather than growing with the term count.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

// C(n, k) in exact integer arithmetic; throws on uint64 overflow.
inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t result = 1;
    for (int i = 1; i <= k; ++i) {
        const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
        // result * num / i is integral at every step; guard the product.
        if (result > std::numeric_limits<std::uint64_t>::max() / num)
            throw std::overflow_error("binomial(" + std::to_string(n) + ", " +
                                      std::to_string(k) + ") overflows");
        result = result * num / static_cast<std::uint64_t>(i);
    }
    return result;
}

inline bool is_power_of_two(std::uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }

} // namespace wlantp
