#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace fbsim {

// Wilson score interval for a binomial proportion.
inline std::pair<double, double> wilson_interval(int64_t successes, int64_t trials,
                                                 double z = 1.959963984540054) {
    if (trials <= 0) return {0.0, 1.0};
    double n = static_cast<double>(trials);
    double p = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double half = (z / denom) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    double lo = successes == 0 ? 0.0 : center - half;
    double hi = successes == trials ? 1.0 : center + half;
    if (lo < 0.0) lo = 0.0;
    if (hi > 1.0) hi = 1.0;
    return {lo, hi};
}

// Rate with a half-count prior; keeps logits finite at 0 and n.
inline double adjusted_rate(int64_t successes, int64_t trials) {
    return (static_cast<double>(successes) + 0.5) / (static_cast<double>(trials) + 1.0);
}

inline double logit(double p) { return std::log(p / (1.0 - p)); }

}  // namespace fbsim
