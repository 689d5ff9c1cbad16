#include "relgate/evidence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relgate {

BettingCalibrator::BettingCalibrator(double eta, double trunc)
    : eta_(eta), trunc_(trunc) {
  if (!(eta > 0.0 && eta < 1.0) || !std::isfinite(eta))
    throw std::invalid_argument("betting calibrator: eta must lie in (0, 1)");
  if (!(trunc >= 1.0) || !std::isfinite(trunc))
    throw std::invalid_argument("betting calibrator: truncation level must be >= 1");

  // integral of min(u^-eta, M) over [0,1]:
  //   M^(1 - 1/eta) + (1 - M^(-(1-eta)/eta)) / (1 - eta)
  // The first term covers [0, M^(-1/eta)] where the power law is clipped at M.
  double integral = std::pow(trunc, 1.0 - 1.0 / eta) +
                    (1.0 - std::pow(trunc, -(1.0 - eta) / eta)) / (1.0 - eta);
  norm_ = 1.0 / integral;
  log_norm_ = std::log(norm_);
  log_trunc_ = std::log(trunc_);
}

double BettingCalibrator::evaluate(double u) const {
  if (!(u > 0.0 && u <= 1.0))
    throw std::invalid_argument("betting calibrator: input must lie in (0, 1]");
  return norm_ * std::min(std::pow(u, -eta_), trunc_);
}

double BettingCalibrator::log_evaluate(double u) const {
  if (!(u > 0.0 && u <= 1.0))
    throw std::invalid_argument("betting calibrator: input must lie in (0, 1]");
  return log_norm_ + std::min(-eta_ * std::log(u), log_trunc_);
}

double ville_threshold(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("ville_threshold: alpha must lie in (0, 1)");
  return 1.0 / alpha;
}

WealthState wealth_update(const WealthState& state, double e_value) {
  if (!(e_value > 0.0) || !std::isfinite(e_value))
    throw std::invalid_argument("wealth_update: e-value must be positive and finite");
  return WealthState{state.log_wealth + std::log(e_value), state.step + 1,
                     state.released_at};
}

ReleaseOutcome run_wrapper(const Trajectory& stream, const ReferencePool& pool,
                           const BettingCalibrator& cal, double alpha, int t_max) {
  return run_wrapper(stream, pool, std::span<const BettingCalibrator>(&cal, 1),
                     alpha, t_max);
}

ReleaseOutcome run_wrapper(const Trajectory& stream, const ReferencePool& pool,
                           std::span<const BettingCalibrator> schedule,
                           double alpha, int t_max) {
  if (stream.steps.empty())
    throw std::invalid_argument("run_wrapper: empty stream");
  if (schedule.empty())
    throw std::invalid_argument("run_wrapper: empty calibrator schedule");
  if (t_max < 1)
    throw std::invalid_argument("run_wrapper: t_max must be >= 1");
  const double threshold = ville_threshold(alpha);

  const int horizon =
      std::min<int>(static_cast<int>(stream.steps.size()), t_max);

  ReleaseOutcome out;
  out.wealth_trace.reserve(horizon);
  out.p_trace.reserve(horizon);

  WealthState state;
  for (int t = 1; t <= horizon; ++t) {
    const auto& cal =
        schedule[std::min<std::size_t>(t - 1, schedule.size() - 1)];
    CalibratedP p = tail_p_value(pool, stream.steps[t - 1].score);
    state = wealth_update(state, cal.evaluate(p.value()));
    out.p_trace.push_back(p);
    out.wealth_trace.push_back(std::exp(state.log_wealth));
    if (!state.released_at && out.wealth_trace.back() >= threshold)
      state.released_at = t;
  }

  if (state.released_at) {
    out.decision = Decision::released;
    out.release_step = state.released_at;
  }
  return out;
}

}  // namespace relgate
