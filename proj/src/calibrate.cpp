#include "relgate/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relgate {

bool fraction_leq(std::uint64_t num, std::uint64_t den, double x) {
  if (den == 0) throw std::invalid_argument("fraction_leq: zero denominator");
  if (num > den) throw std::invalid_argument("fraction_leq: fraction must not exceed 1");
  if (den >= (std::uint64_t{1} << 32))
    throw std::invalid_argument("fraction_leq: denominator too large for the exact path");
  if (std::isnan(x)) throw std::invalid_argument("fraction_leq: NaN threshold");
  if (num == 0) return x >= 0.0;
  if (x <= 0.0) return false;
  if (x >= 1.0) return true;  // num/den <= 1 <= x

  // 0 < x < 1. Write x = mint * 2^(e-53) with mint an integer < 2^53; then
  // num/den <= x  iff  num * 2^(53-e) <= mint * den, both sides exact in
  // 128-bit arithmetic. mint*den < 2^85, so any shift of 86+ already decides.
  int e = 0;
  double m = std::frexp(x, &e);  // x = m * 2^e, m in [0.5, 1)
  auto mint = static_cast<unsigned __int128>(std::ldexp(m, 53));
  int shift = 53 - e;
  if (shift >= 86) return false;
  unsigned __int128 lhs = static_cast<unsigned __int128>(num) << shift;
  unsigned __int128 rhs = mint * static_cast<unsigned __int128>(den);
  return lhs <= rhs;
}

bool CalibratedP::leq(double threshold) const {
  return fraction_leq(1 + ge_count, pool_size + 1, threshold);
}

CalibratedP tail_p_value(const ReferencePool& pool, double score) {
  if (!std::isfinite(score))
    throw std::invalid_argument("tail_p_value: non-finite score");
  const auto& r = pool.scores();
  auto first_below = std::partition_point(
      r.begin(), r.end(), [score](double v) { return v >= score; });
  return CalibratedP{static_cast<std::size_t>(first_below - r.begin()), r.size()};
}

double p_floor(const ReferencePool& pool) {
  return 1.0 / static_cast<double>(pool.size() + 1);
}

}  // namespace relgate
