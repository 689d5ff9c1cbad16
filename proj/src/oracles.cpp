#include "relgate/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "relgate/calibrate.hpp"

namespace relgate {

ScoreLaw ScoreLaw::parse(const std::string& text) {
  ScoreLaw law;
  if (text == "uniform") {
    law.kind = Kind::uniform;
    return law;
  }
  if (text == "empirical") {
    law.kind = Kind::empirical;
    return law;
  }
  auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
  try {
    if (head == "beta") {
      auto comma = args.find(',');
      if (comma == std::string::npos) throw std::invalid_argument(text);
      law.kind = Kind::beta;
      law.a = std::stod(args.substr(0, comma));
      law.b = std::stod(args.substr(comma + 1));
      if (!(law.a > 0.0 && law.b > 0.0)) throw std::invalid_argument(text);
      return law;
    }
    if (head == "point") {
      law.kind = Kind::point_mass;
      law.value = std::stod(args);
      if (!std::isfinite(law.value)) throw std::invalid_argument(text);
      return law;
    }
  } catch (const std::exception&) {
    // fall through to the uniform error below
  }
  throw std::invalid_argument(
      "score law '" + text +
      "' not recognized; expected uniform | beta:a,b | empirical | point:x");
}

std::string ScoreLaw::to_string() const {
  switch (kind) {
    case Kind::uniform:
      return "uniform";
    case Kind::beta:
      return "beta:" + std::to_string(a) + "," + std::to_string(b);
    case Kind::empirical:
      return "empirical";
    case Kind::point_mass:
      return "point:" + std::to_string(value);
  }
  return "uniform";
}

double ScoreLaw::sample(Rng& rng, std::span<const double> pool_scores) const {
  switch (kind) {
    case Kind::uniform:
      return rng.uniform();
    case Kind::beta:
      return rng.beta(a, b);
    case Kind::empirical: {
      if (pool_scores.empty())
        throw std::invalid_argument("empirical score law: no pool to resample");
      auto idx = static_cast<std::size_t>(rng.uniform() *
                                          static_cast<double>(pool_scores.size()));
      return pool_scores[std::min(idx, pool_scores.size() - 1)];
    }
    case Kind::point_mass:
      return value;
  }
  return rng.uniform();
}

double rout_upper_bound(double q, double pi0, double alpha, double beta) {
  if (!(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("rout_upper_bound: q must lie in [0, 1]");
  if (!(pi0 >= 0.0 && pi0 <= 1.0))
    throw std::invalid_argument("rout_upper_bound: pi0 must lie in [0, 1]");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("rout_upper_bound: alpha must lie in (0, 1]");
  if (!(beta >= 0.0 && beta <= 1.0))
    throw std::invalid_argument("rout_upper_bound: beta must lie in [0, 1]");
  const double infeasible_mass = pi0 * alpha;
  const double feasible_mass = (1.0 - pi0) * beta;
  if (infeasible_mass + feasible_mass <= 0.0)
    throw std::invalid_argument(
        "rout_upper_bound: both release channels are zero; the bound is undefined");
  return q + (1.0 - q) * infeasible_mass / (infeasible_mass + feasible_mass);
}

double naive_stopping_lower_bound(std::span<const double> c_seq, int horizon) {
  if (horizon < 0)
    throw std::invalid_argument("naive_stopping_lower_bound: horizon must be >= 0");
  if (static_cast<std::size_t>(horizon) > c_seq.size())
    throw std::invalid_argument(
        "naive_stopping_lower_bound: horizon exceeds the c sequence length");
  double sum = 0.0;
  for (int t = 0; t < horizon; ++t) {
    if (!(c_seq[t] >= 0.0 && c_seq[t] <= 1.0))
      throw std::invalid_argument(
          "naive_stopping_lower_bound: c entries must lie in [0, 1]");
    sum += c_seq[t];
  }
  return 1.0 - std::exp(-sum);
}

double power_lower_bound(double b_t, double a_t, double z_max, int horizon) {
  if (!(z_max > 0.0) || !std::isfinite(z_max))
    throw std::invalid_argument("power_lower_bound: z_max must be positive");
  if (horizon < 1)
    throw std::invalid_argument("power_lower_bound: horizon must be >= 1");
  const double margin = b_t - a_t;
  if (margin <= 0.0) return 0.0;  // vacuous regime
  return 1.0 - std::exp(-2.0 * margin * margin /
                        (static_cast<double>(horizon) * z_max * z_max));
}

double drift_upper_bound(double alpha, double trunc, double eps, int horizon) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("drift_upper_bound: alpha must lie in (0, 1)");
  if (!(trunc >= 0.0))
    throw std::invalid_argument("drift_upper_bound: truncation level must be >= 0");
  if (!(eps >= 0.0))
    throw std::invalid_argument("drift_upper_bound: eps must be >= 0");
  if (horizon < 0)
    throw std::invalid_argument("drift_upper_bound: horizon must be >= 0");
  return alpha * std::pow(1.0 + trunc * eps, horizon);
}

namespace {

void validate_config(const NullSimConfig& cfg) {
  if (cfg.reps < 1) throw std::invalid_argument("simulation: reps must be >= 1");
  if (cfg.horizon < 1) throw std::invalid_argument("simulation: horizon must be >= 1");
  if (!(cfg.drift_eps >= 0.0 && cfg.drift_eps <= 1.0))
    throw std::invalid_argument("simulation: drift eps must lie in [0, 1]");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw std::invalid_argument("simulation: alpha must lie in (0, 1)");
}

// Splits [0, reps) across threads; each replication owns a derived seed, so
// the partition never changes the counts.
std::size_t count_over_reps(std::size_t reps, unsigned threads,
                            const std::function<bool(std::uint64_t)>& one_rep) {
  const unsigned workers = std::max(1u, threads);
  if (workers == 1) {
    std::size_t count = 0;
    for (std::uint64_t r = 0; r < reps; ++r)
      if (one_rep(r)) ++count;
    return count;
  }
  std::vector<std::size_t> partial(workers, 0);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      std::size_t local = 0;
      for (std::uint64_t r = w; r < reps; r += workers)
        if (one_rep(r)) ++local;
      partial[w] = local;
    });
  }
  for (auto& t : pool) t.join();
  std::size_t count = 0;
  for (auto c : partial) count += c;
  return count;
}

}  // namespace

BoundReport simulate_null(const NullSimConfig& cfg, const BettingCalibrator& cal,
                          const ReferencePool* pool_override) {
  validate_config(cfg);
  if (pool_override == nullptr && cfg.n_pool < 1)
    throw std::invalid_argument("simulate_null: n_pool must be >= 1");

  ReferencePool pool = [&] {
    if (pool_override != nullptr) return *pool_override;
    Rng rng(derive_seed(cfg.seed, std::numeric_limits<std::uint64_t>::max()));
    std::vector<double> scores;
    scores.reserve(cfg.n_pool);
    for (std::size_t i = 0; i < cfg.n_pool; ++i)
      scores.push_back(cfg.pool_law.sample(rng, {}));
    return ReferencePool::from_scores(std::move(scores));
  }();

  const double contaminant = pool.max_score() + 1.0;
  const double threshold = ville_threshold(cfg.alpha);
  const std::span<const double> pool_scores(pool.scores());

  auto one_rep = [&](std::uint64_t r) {
    Rng rng(derive_seed(cfg.seed, r));
    double log_wealth = 0.0;
    for (int t = 1; t <= cfg.horizon; ++t) {
      double score = rng.uniform() < cfg.drift_eps
                         ? contaminant
                         : cfg.stream_law.sample(rng, pool_scores);
      CalibratedP p = tail_p_value(pool, score);
      log_wealth += cal.log_evaluate(p.value());
      if (std::exp(log_wealth) >= threshold) return true;
    }
    return false;
  };

  const std::size_t released = count_over_reps(cfg.reps, cfg.threads, one_rep);

  BoundReport report;
  report.empirical =
      static_cast<double>(released) / static_cast<double>(cfg.reps);
  report.std_error = std::sqrt(report.empirical * (1.0 - report.empirical) /
                               static_cast<double>(cfg.reps));
  report.bound = cfg.drift_eps > 0.0
                     ? drift_upper_bound(cfg.alpha, cal.trunc(), cfg.drift_eps,
                                         cfg.horizon)
                     : cfg.alpha;
  report.satisfied = report.empirical <= report.bound + 3.0 * report.std_error;
  return report;
}

BoundReport simulate_naive(const NullSimConfig& cfg, double per_step_hit) {
  validate_config(cfg);
  if (!(per_step_hit >= 0.0 && per_step_hit <= 1.0))
    throw std::invalid_argument("simulate_naive: per-step hit rate must lie in [0, 1]");

  auto one_rep = [&](std::uint64_t r) {
    Rng rng(derive_seed(cfg.seed, r));
    for (int t = 1; t <= cfg.horizon; ++t)
      if (rng.uniform() < per_step_hit) return true;
    return false;
  };

  const std::size_t crossed = count_over_reps(cfg.reps, cfg.threads, one_rep);

  std::vector<double> c_seq(cfg.horizon, per_step_hit);
  BoundReport report;
  report.empirical = static_cast<double>(crossed) / static_cast<double>(cfg.reps);
  report.std_error = std::sqrt(report.empirical * (1.0 - report.empirical) /
                               static_cast<double>(cfg.reps));
  report.bound = naive_stopping_lower_bound(c_seq, cfg.horizon);
  report.satisfied = report.empirical >= report.bound - 3.0 * report.std_error;
  return report;
}

BoundReport tv_separation_check(std::span<const double> p0,
                                std::span<const double> p1) {
  if (p0.size() != p1.size() || p0.empty())
    throw std::invalid_argument(
        "tv_separation_check: distributions must be non-empty and equal-sized");
  if (p0.size() > 20)
    throw std::invalid_argument(
        "tv_separation_check: outcome space too large for exhaustive enumeration");
  auto validate = [](std::span<const double> p) {
    double sum = 0.0;
    for (double mass : p) {
      if (!(mass >= 0.0) || !std::isfinite(mass))
        throw std::invalid_argument("tv_separation_check: negative probability mass");
      sum += mass;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("tv_separation_check: distribution must sum to 1");
  };
  validate(p0);
  validate(p1);

  const std::size_t k = p0.size();
  double tv = 0.0;
  for (std::size_t i = 0; i < k; ++i) tv += std::abs(p1[i] - p0[i]);
  tv *= 0.5;

  double max_gap = -std::numeric_limits<double>::infinity();
  const std::uint32_t masks = std::uint32_t{1} << k;
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    double release0 = 0.0;
    double release1 = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (std::uint32_t{1} << i)) {
        release0 += p0[i];
        release1 += p1[i];
      }
    }
    max_gap = std::max(max_gap, release1 - release0);
  }

  BoundReport report;
  report.empirical = max_gap;
  report.std_error = 0.0;
  report.bound = tv;
  report.satisfied = max_gap <= tv + 1e-12;
  return report;
}

}  // namespace relgate
