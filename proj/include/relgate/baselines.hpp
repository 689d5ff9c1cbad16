#pragma once

#include <limits>
#include <span>
#include <vector>

#include "relgate/evidence.hpp"
#include "relgate/pool.hpp"
#include "relgate/trajectory.hpp"

namespace relgate {

inline constexpr int kFullStream = std::numeric_limits<int>::max();

// One-step calibrated threshold: release at the first step with p_t <= alpha.
// Same pool and p-values as the wrapper, no accumulation. The comparison is
// exact on the discrete p-grid.
ReleaseOutcome first_p_rule(const Trajectory& stream, const ReferencePool& pool,
                            double alpha, int t_max = kFullStream);

// Threshold for the entropy rule: mean entropy over correctly generated bank
// candidates (candidate-level mean).
double entropy_threshold_from_bank(std::span<const double> correct_bank_entropies);

// Release at the first step with H_t <= threshold. Every step of the stream
// must carry an entropy value.
ReleaseOutcome entropy_rule(const Trajectory& stream, double threshold,
                            int t_max = kFullStream);

// Mean token-level entropy of a candidate from its per-position predictive
// distributions (natural log, 0 log 0 = 0). Each distribution must sum to 1
// within 1e-6 and is renormalized internally.
double mean_token_entropy(std::span<const std::vector<double>> step_distributions);

// Score-stability rule: release at the first t >= 2 where the two-step score
// range is within one visible test (|S_t - S_{t-1}| <= 1/n_test, with a 1e-12
// slack for float boundaries) and S_t >= 0.8. Never releases at t = 1.
ReleaseOutcome stability_rule(const Trajectory& stream, int n_test,
                              int t_max = kFullStream);

}  // namespace relgate
