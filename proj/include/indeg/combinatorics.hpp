#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace indeg {

/// log C(n, k) in extended precision; -inf outside 0 <= k <= n.
inline long double log_choose(long double n, long double k) {
  if (k < 0 || n < 0 || k > n) return -std::numeric_limits<long double>::infinity();
  if (k == 0 || k == n) return 0.0L;
  return std::lgamma(n + 1.0L) - std::lgamma(k + 1.0L) - std::lgamma(n - k + 1.0L);
}

inline double choose(double n, double k) {
  return static_cast<double>(std::exp(log_choose(n, k)));
}

}  // namespace indeg
