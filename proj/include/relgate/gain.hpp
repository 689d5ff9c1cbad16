#pragma once

#include <optional>
#include <span>
#include <vector>

#include "relgate/evidence.hpp"
#include "relgate/pool.hpp"
#include "relgate/trajectory.hpp"

namespace relgate {

// Per-trajectory view of the evidence process in gain coordinates: how much
// each step contributed above the worst-case p = 1 baseline, how much of that
// came from oracle-correct candidates, and how both compare against the
// cumulative gain the release threshold requires.
struct GainTrace {
  std::vector<double> step_gains;        // Z_t = log f(p_t) - log f(1)
  std::vector<double> cum_gain;          // G_t
  std::vector<double> cum_correct_gain;  // G_t restricted to correct steps
  std::vector<double> required;          // A_{alpha,t} = log(1/alpha) - t log f(1)
  double margin = 0.0;                   // max_t (G_t - A_t)
  double margin_plus = 0.0;              // max_t (G_t^+ - A_t)
  double z_max = 0.0;                    // log f(1/(n+1)) - log f(1)
  bool release_equivalent = false;       // crossing test == run_wrapper decision
};

// Step log-gain Z = log f(p) - log f(1); always >= 0 for p in (0,1].
double step_gain(const BettingCalibrator& cal, double p);

// Cumulative gain needed for the wealth to reach 1/alpha by step t.
double required_gain(const BettingCalibrator& cal, double alpha, int t);

// Post-hoc attribution of a fully labeled trajectory. Also cross-checks that
// the gain crossing test G_t >= A_t reproduces the wrapper's release decision.
GainTrace gain_decomposition(const Trajectory& stream, const ReferencePool& pool,
                             const BettingCalibrator& cal, double alpha);

// Supplied-minus-required gain B_T - A_{alpha,T}.
double power_margin(double b_t, double a_t);

// Cohort-level stepwise decomposition over feasible labeled trajectories.
struct StepwiseFeasibleSummary {
  struct Step {
    double correct_fraction = 0.0;              // fraction of tasks correct at t
    std::optional<double> mean_correct_gain;    // mean Z_t among correct candidates
    double mean_correct_contrib = 0.0;          // mean of Y_t * Z_t
    double cum_correct_contrib = 0.0;           // running sum of the above
    double required = 0.0;                      // A_{alpha,t}
  };
  std::vector<Step> steps;
};

StepwiseFeasibleSummary stepwise_feasible_summary(std::span<const Trajectory> streams,
                                                  const ReferencePool& pool,
                                                  const BettingCalibrator& cal,
                                                  double alpha);

}  // namespace relgate
