#pragma once

#include <cstddef>
#include <cstdint>

#include "relgate/pool.hpp"

namespace relgate {

// Empirical upper-tail p-value (1 + #{pool scores >= online score}) / (n + 1),
// kept as an exact integer pair. Conversion to floating point happens only for
// reporting; threshold comparisons go through the exact path in leq() so that
// the discrete p-grid cannot flip on a float boundary.
struct CalibratedP {
  std::size_t ge_count = 0;   // pool scores >= the online score
  std::size_t pool_size = 0;  // n

  double value() const {
    return static_cast<double>(1 + ge_count) / static_cast<double>(pool_size + 1);
  }
  bool leq(double threshold) const;  // exact (1 + ge_count)/(pool_size + 1) <= threshold

  friend bool operator==(const CalibratedP&, const CalibratedP&) = default;
};

// Exact num/den <= x for integers 0 <= num <= den < 2^32 and a finite double
// x. The comparison is carried out on the binary expansion of x, so there is
// no rounding step at all.
bool fraction_leq(std::uint64_t num, std::uint64_t den, double x);

// Rank-calibrates one online score against the pool. Ties count against the
// candidate (>= comparison), which keeps the p-value conservative. Uses a
// binary search over the descending-sorted pool.
CalibratedP tail_p_value(const ReferencePool& pool, double score);

// Smallest attainable p-value, 1/(n+1).
double p_floor(const ReferencePool& pool);

}  // namespace relgate
