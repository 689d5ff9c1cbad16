#pragma once

#include <optional>
#include <span>
#include <vector>

#include "relgate/calibrate.hpp"
#include "relgate/pool.hpp"
#include "relgate/trajectory.hpp"

namespace relgate {

// Truncated power betting function f(u) = norm * min(u^-eta, trunc) with norm
// chosen in closed form so that the integral of f over [0,1] is exactly 1.
// Non-increasing on (0,1], so small p-values earn large e-values.
class BettingCalibrator {
 public:
  BettingCalibrator(double eta, double trunc);

  double eta() const { return eta_; }
  double trunc() const { return trunc_; }
  double norm() const { return norm_; }

  double evaluate(double u) const;      // f(u), u in (0,1]
  double log_evaluate(double u) const;  // log f(u), stable near the floor

 private:
  double eta_;
  double trunc_;
  double norm_;
  double log_norm_;
  double log_trunc_;
};

// Release threshold 1/alpha from the time-uniform crossing inequality.
double ville_threshold(double alpha);

// Log-domain accumulated evidence. Products of e-values overflow on long
// horizons; the log form does not, and the wealth/gain identity test pins the
// equivalence.
struct WealthState {
  double log_wealth = 0.0;  // log E_t; E_0 = 1
  int step = 0;
  std::optional<int> released_at;  // first step with E_t >= 1/alpha, sticky
};

// Multiplies one positive e-value into the wealth. released_at is preserved.
WealthState wealth_update(const WealthState& state, double e_value);

enum class Decision { released, abstained };

struct ReleaseOutcome {
  Decision decision = Decision::abstained;
  std::optional<int> release_step;
  std::vector<double> wealth_trace;   // E_t per evaluated step (evidence rules)
  std::vector<CalibratedP> p_trace;   // p_t per evaluated step (calibrated rules)

  bool released() const { return decision == Decision::released; }
};

// The release wrapper: calibrate each score against the pool, bet on the
// p-value, release at the first step with E_t >= 1/alpha (inclusive). The
// traces always cover min(stream length, t_max) steps, also past a release,
// so forced-continuation wealth is observable. Streams shorter than t_max
// abstain at stream end.
ReleaseOutcome run_wrapper(const Trajectory& stream, const ReferencePool& pool,
                           const BettingCalibrator& cal, double alpha, int t_max);

// Predictable per-step schedule: step t uses schedule[min(t-1, size-1)].
ReleaseOutcome run_wrapper(const Trajectory& stream, const ReferencePool& pool,
                           std::span<const BettingCalibrator> schedule,
                           double alpha, int t_max);

}  // namespace relgate
