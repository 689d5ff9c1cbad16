#pragma once

#include <cstdint>
#include <random>

namespace relgate {

// Deterministic seed derivation: a root seed plus a replication index give
// the same per-replication stream no matter how replications are scheduled.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index);

// Thin deterministic sampler over std::mt19937_64. The double conversions and
// the gamma/beta samplers are spelled out here rather than taken from
// std::*_distribution because the standard leaves those sequences
// implementation-defined and the simulation harness promises bit-identical
// replay for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  double uniform() {  // [0, 1)
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform_open() { return 1.0 - uniform(); }  // (0, 1]

  double normal();
  double gamma(double shape);             // shape > 0, unit scale
  double beta(double a, double b);        // a, b > 0

 private:
  std::mt19937_64 gen_;
};

}  // namespace relgate
