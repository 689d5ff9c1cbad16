#include "relgate/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "relgate/calibrate.hpp"

namespace relgate {

namespace {

int clamp_horizon(const Trajectory& stream, int t_max) {
  if (stream.steps.empty())
    throw std::invalid_argument("stopping rule: empty stream");
  if (t_max < 1) throw std::invalid_argument("stopping rule: t_max must be >= 1");
  return std::min<int>(static_cast<int>(stream.steps.size()), t_max);
}

}  // namespace

ReleaseOutcome first_p_rule(const Trajectory& stream, const ReferencePool& pool,
                            double alpha, int t_max) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("first_p_rule: alpha must lie in (0, 1)");
  const int horizon = clamp_horizon(stream, t_max);

  ReleaseOutcome out;
  out.p_trace.reserve(horizon);
  for (int t = 1; t <= horizon; ++t) {
    CalibratedP p = tail_p_value(pool, stream.steps[t - 1].score);
    out.p_trace.push_back(p);
    if (out.decision == Decision::abstained && p.leq(alpha)) {
      out.decision = Decision::released;
      out.release_step = t;
    }
  }
  return out;
}

double entropy_threshold_from_bank(std::span<const double> correct_bank_entropies) {
  if (correct_bank_entropies.empty())
    throw std::invalid_argument("entropy_threshold_from_bank: empty bank");
  double sum = 0.0;
  for (double h : correct_bank_entropies) sum += h;
  return sum / static_cast<double>(correct_bank_entropies.size());
}

ReleaseOutcome entropy_rule(const Trajectory& stream, double threshold, int t_max) {
  const int horizon = clamp_horizon(stream, t_max);
  for (const auto& s : stream.steps)
    if (!s.entropy)
      throw std::invalid_argument("entropy_rule: step " + std::to_string(s.step) +
                                  " of task '" + stream.task_id +
                                  "' lacks an entropy value");

  ReleaseOutcome out;
  for (int t = 1; t <= horizon; ++t) {
    if (*stream.steps[t - 1].entropy <= threshold) {
      out.decision = Decision::released;
      out.release_step = t;
      break;
    }
  }
  return out;
}

double mean_token_entropy(std::span<const std::vector<double>> step_distributions) {
  if (step_distributions.empty())
    throw std::invalid_argument("mean_token_entropy: no positions");

  double total = 0.0;
  for (const auto& dist : step_distributions) {
    if (dist.empty())
      throw std::invalid_argument("mean_token_entropy: empty distribution");
    double sum = 0.0;
    for (double mass : dist) {
      if (!(mass >= 0.0) || !std::isfinite(mass))
        throw std::invalid_argument("mean_token_entropy: negative probability mass");
      sum += mass;
    }
    if (std::abs(sum - 1.0) > 1e-6)
      throw std::invalid_argument(
          "mean_token_entropy: distribution must sum to 1 within 1e-6");
    double entropy = 0.0;
    for (double mass : dist) {
      double p = mass / sum;
      if (p > 0.0) entropy -= p * std::log(p);
    }
    total += entropy;
  }
  return total / static_cast<double>(step_distributions.size());
}

ReleaseOutcome stability_rule(const Trajectory& stream, int n_test, int t_max) {
  if (n_test < 1)
    throw std::invalid_argument("stability_rule: n_test must be >= 1");
  const int horizon = clamp_horizon(stream, t_max);

  // One visible test on the discrete score scale, with slack for float
  // boundaries like 1.0 - 0.967 vs 1/30.
  const double tolerance = 1.0 / static_cast<double>(n_test) + 1e-12;

  ReleaseOutcome out;
  for (int t = 2; t <= horizon; ++t) {
    double prev = stream.steps[t - 2].score;
    double cur = stream.steps[t - 1].score;
    if (std::abs(cur - prev) <= tolerance && cur >= 0.8) {
      out.decision = Decision::released;
      out.release_step = t;
      break;
    }
  }
  return out;
}

}  // namespace relgate
