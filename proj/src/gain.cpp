#include "relgate/gain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "relgate/calibrate.hpp"

namespace relgate {

double step_gain(const BettingCalibrator& cal, double p) {
  if (!(p > 0.0 && p <= 1.0))
    throw std::invalid_argument("step_gain: p must lie in (0, 1]");
  // log f(p) - log f(1); the normalization constant cancels.
  return cal.log_evaluate(p) - cal.log_evaluate(1.0);
}

double required_gain(const BettingCalibrator& cal, double alpha, int t) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("required_gain: alpha must lie in (0, 1)");
  if (t < 0) throw std::invalid_argument("required_gain: t must be >= 0");
  return -std::log(alpha) - static_cast<double>(t) * cal.log_evaluate(1.0);
}

double power_margin(double b_t, double a_t) { return b_t - a_t; }

GainTrace gain_decomposition(const Trajectory& stream, const ReferencePool& pool,
                             const BettingCalibrator& cal, double alpha) {
  if (stream.steps.empty())
    throw std::invalid_argument("gain_decomposition: empty stream");
  for (const auto& s : stream.steps)
    if (!s.correct)
      throw std::invalid_argument("gain_decomposition: step " +
                                  std::to_string(s.step) + " of task '" +
                                  stream.task_id + "' lacks a correctness label");

  GainTrace trace;
  const int horizon = static_cast<int>(stream.steps.size());
  trace.step_gains.reserve(horizon);
  trace.cum_gain.reserve(horizon);
  trace.cum_correct_gain.reserve(horizon);
  trace.required.reserve(horizon);

  double cum = 0.0;
  double cum_correct = 0.0;
  bool crossed = false;
  for (int t = 1; t <= horizon; ++t) {
    const auto& step = stream.steps[t - 1];
    CalibratedP p = tail_p_value(pool, step.score);
    double z = step_gain(cal, p.value());
    cum += z;
    if (*step.correct) cum_correct += z;
    double a = required_gain(cal, alpha, t);

    trace.step_gains.push_back(z);
    trace.cum_gain.push_back(cum);
    trace.cum_correct_gain.push_back(cum_correct);
    trace.required.push_back(a);

    double margin = cum - a;
    double margin_plus = cum_correct - a;
    if (t == 1 || margin > trace.margin) trace.margin = margin;
    if (t == 1 || margin_plus > trace.margin_plus) trace.margin_plus = margin_plus;
    if (cum >= a) crossed = true;
  }

  trace.z_max = step_gain(cal, p_floor(pool));
  bool released = run_wrapper(stream, pool, cal, alpha, horizon).released();
  trace.release_equivalent = (crossed == released);
  return trace;
}

StepwiseFeasibleSummary stepwise_feasible_summary(std::span<const Trajectory> streams,
                                                  const ReferencePool& pool,
                                                  const BettingCalibrator& cal,
                                                  double alpha) {
  if (streams.empty())
    throw std::invalid_argument("stepwise_feasible_summary: empty cohort");

  std::size_t max_len = 0;
  for (const auto& stream : streams) {
    for (const auto& s : stream.steps)
      if (!s.correct)
        throw std::invalid_argument("stepwise_feasible_summary: step " +
                                    std::to_string(s.step) + " of task '" +
                                    stream.task_id + "' lacks a correctness label");
    max_len = std::max(max_len, stream.steps.size());
  }

  StepwiseFeasibleSummary summary;
  double cum = 0.0;
  for (std::size_t t = 1; t <= max_len; ++t) {
    std::size_t present = 0;
    std::size_t correct = 0;
    double correct_gain_sum = 0.0;
    for (const auto& stream : streams) {
      if (stream.steps.size() < t) continue;
      ++present;
      const auto& step = stream.steps[t - 1];
      if (*step.correct) {
        ++correct;
        CalibratedP p = tail_p_value(pool, step.score);
        correct_gain_sum += step_gain(cal, p.value());
      }
    }

    StepwiseFeasibleSummary::Step row;
    row.correct_fraction =
        static_cast<double>(correct) / static_cast<double>(present);
    if (correct > 0)
      row.mean_correct_gain = correct_gain_sum / static_cast<double>(correct);
    row.mean_correct_contrib = correct_gain_sum / static_cast<double>(present);
    cum += row.mean_correct_contrib;
    row.cum_correct_contrib = cum;
    row.required = required_gain(cal, alpha, static_cast<int>(t));
    summary.steps.push_back(row);
  }
  return summary;
}

}  // namespace relgate
