#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "relgate/evidence.hpp"
#include "relgate/pool.hpp"
#include "relgate/rng.hpp"

namespace relgate {

// Named score distribution for the simulation harness: continuous, tied
// (empirical resampling), and adversarial point-mass cases.
struct ScoreLaw {
  enum class Kind { uniform, beta, empirical, point_mass };

  Kind kind = Kind::uniform;
  double a = 1.0;      // beta shape parameters
  double b = 1.0;
  double value = 0.0;  // point mass location

  // "uniform" | "beta:a,b" | "empirical" | "point:x"
  static ScoreLaw parse(const std::string& text);
  std::string to_string() const;

  double sample(Rng& rng, std::span<const double> pool_scores) const;
};

struct NullSimConfig {
  std::size_t n_pool = 200;
  ScoreLaw pool_law{};                               // uniform(0,1)
  ScoreLaw stream_law{ScoreLaw::Kind::empirical};    // resample the pool
  int horizon = 10;
  std::size_t reps = 10000;
  std::uint64_t seed = 0;
  double drift_eps = 0.0;  // total-variation contamination weight
  double alpha = 0.1;
  unsigned threads = 1;
};

// Monte Carlo or enumeration estimate against a theory bound. The direction
// of `satisfied` depends on the bound: upper bounds require
// empirical <= bound + 3 stderr, lower bounds empirical >= bound - 3 stderr.
struct BoundReport {
  double empirical = 0.0;
  double std_error = 0.0;
  double bound = 0.0;
  bool satisfied = false;
};

// Release-conditional failure bound q + (1-q) * pi0*alpha / (pi0*alpha + (1-pi0)*beta),
// where q is the feasible-side failure rate, pi0 the infeasible mass, and
// beta the feasible-side release probability.
double rout_upper_bound(double q, double pi0, double alpha, double beta);

// Crossing probability lower bound 1 - exp(-sum_{t<=T} c_t) for repeated
// one-step thresholding with per-step hit chance at least c_t.
double naive_stopping_lower_bound(std::span<const double> c_seq, int horizon);

// Release power lower bound 1 - exp(-2 (b - a)^2 / (T z_max^2)); 0 when the
// supplied gain does not exceed the required gain.
double power_lower_bound(double b_t, double a_t, double z_max, int horizon);

// False-release inflation under per-step calibration drift: alpha (1 + M eps)^T.
double drift_upper_bound(double alpha, double trunc, double eps, int horizon);

// Runs the wrapper on simulated null streams. Draws one pool from
// cfg.pool_law (or uses the override), then per replication draws a length-T
// stream from (1 - eps) * stream_law + eps * point mass above the pool
// maximum, whose total variation from the base law is exactly eps. Reports
// the fraction of replications whose wealth ever reaches 1/alpha against the
// level alpha (eps = 0) or the drift bound (eps > 0). Deterministic given the
// seed, for any thread count.
BoundReport simulate_null(const NullSimConfig& cfg, const BettingCalibrator& cal,
                          const ReferencePool* pool_override = nullptr);

// Simulates i.i.d. Bernoulli(c) one-step crossings under the naive stopping
// rule; checks the empirical crossing fraction against the lower bound.
BoundReport simulate_naive(const NullSimConfig& cfg, double per_step_hit);

// Enumerates every deterministic release rule over a finite outcome space
// (at most 20 outcomes) and verifies P1(D=1) <= P0(D=1) + TV(p1, p0) for each.
// empirical = the largest P1 - P0 over rules, bound = TV; the tightest slack
// observed is bound - empirical, zero at the TV-achieving set.
BoundReport tv_separation_check(std::span<const double> p0,
                                std::span<const double> p1);

}  // namespace relgate
