#include "relgate/pool.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "relgate/calibrate.hpp"
#include "relgate/errors.hpp"

namespace relgate {

namespace {

void validate_rule(const UpperTailRule& rule) {
  if (!(rule.q > 0.0 && rule.q <= 1.0) || !std::isfinite(rule.q))
    throw std::invalid_argument("upper-tail rule: q must lie in (0, 1]");
}

}  // namespace

ReferencePool ReferencePool::from_scores(std::vector<double> scores,
                                         UpperTailRule rule, Meta meta) {
  validate_rule(rule);
  if (scores.empty())
    throw std::invalid_argument("reference pool: score list must be non-empty");
  for (double s : scores)
    if (!std::isfinite(s))
      throw std::invalid_argument("reference pool: non-finite score");
  std::sort(scores.begin(), scores.end(), std::greater<>());
  ReferencePool pool;
  pool.scores_ = std::move(scores);
  pool.rule_ = rule;
  pool.meta_ = std::move(meta);
  return pool;
}

ReferencePool collect_hard_negatives(std::span<const ScoredCandidate> candidates,
                                     UpperTailRule rule,
                                     ReferencePool::Meta meta) {
  validate_rule(rule);
  if (candidates.empty())
    throw std::invalid_argument("collect_hard_negatives: empty candidate list");

  std::vector<double> incorrect;
  for (const auto& c : candidates) {
    if (!std::isfinite(c.score))
      throw std::invalid_argument("collect_hard_negatives: non-finite score for task '" +
                                  c.task_id + "'");
    if (!c.adjudged_correct) incorrect.push_back(c.score);
  }
  if (incorrect.empty())
    throw std::invalid_argument(
        "collect_hard_negatives: every candidate is adjudged correct; no negatives to pool");

  std::sort(incorrect.begin(), incorrect.end(), std::greater<>());

  // k = ceil(q * n), treating products within 1e-9 of an integer as exact so
  // that decimal q values (0.55 * 20 = 11.000000000000002 in binary) do not
  // overshoot the intended rank.
  double target = rule.q * static_cast<double>(incorrect.size());
  auto k = static_cast<std::size_t>(std::ceil(target - 1e-9));
  if (k == 0) k = 1;
  double cutoff = incorrect[k - 1];

  auto first_below = std::partition_point(
      incorrect.begin(), incorrect.end(),
      [cutoff](double v) { return v >= cutoff; });
  incorrect.erase(first_below, incorrect.end());

  return ReferencePool::from_scores(std::move(incorrect), rule, std::move(meta));
}

PoolDiagnostic pool_diagnostic(const ReferencePool& pool,
                               std::span<const double> heldout_scores,
                               std::span<const double> grid, double slack) {
  if (heldout_scores.empty())
    throw std::invalid_argument("pool_diagnostic: empty held-out sample");
  if (grid.empty())
    throw std::invalid_argument("pool_diagnostic: empty grid");
  if (!(slack >= 0.0))
    throw std::invalid_argument("pool_diagnostic: slack must be >= 0");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0))
      throw std::invalid_argument("pool_diagnostic: grid levels must lie in [0, 1]");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::invalid_argument("pool_diagnostic: grid must be strictly ascending");
  }

  std::vector<CalibratedP> ps;
  ps.reserve(heldout_scores.size());
  std::uint64_t numerator_sum = 0;  // sum of (1 + ge_count)
  for (double s : heldout_scores) {
    CalibratedP p = tail_p_value(pool, s);
    numerator_sum += 1 + p.ge_count;
    ps.push_back(p);
  }

  PoolDiagnostic diag;
  diag.grid.assign(grid.begin(), grid.end());
  diag.slack = slack;
  diag.pass = true;
  const auto h = static_cast<std::uint64_t>(heldout_scores.size());
  for (double u : grid) {
    std::uint64_t count = 0;
    for (const auto& p : ps)
      if (p.leq(u)) ++count;
    diag.ecdf.push_back(static_cast<double>(count) / static_cast<double>(h));
    if (!fraction_leq(count, h, u + slack)) diag.pass = false;
  }
  diag.mean_p = static_cast<double>(numerator_sum) /
                (static_cast<double>(pool.size() + 1) * static_cast<double>(h));
  return diag;
}

namespace {

ReferencePool pool_from_parsed(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InputError("pool file: top level must be an object");
  if (!doc.contains("scores") || !doc["scores"].is_array())
    throw InputError("pool file: missing 'scores' array");
  if (!doc.contains("rule") || !doc["rule"].is_object() || !doc["rule"].contains("q") ||
      !doc["rule"]["q"].is_number())
    throw InputError("pool file: missing 'rule' object with numeric 'q'");

  std::vector<double> scores;
  for (const auto& v : doc["scores"]) {
    if (!v.is_number()) throw InputError("pool file: non-numeric score entry");
    double s = v.get<double>();
    if (!std::isfinite(s)) throw InputError("pool file: non-finite score entry");
    scores.push_back(s);
  }
  if (scores.empty()) throw InputError("pool file: empty score list");

  UpperTailRule rule{doc["rule"]["q"].get<double>()};

  ReferencePool::Meta meta;
  if (doc.contains("meta")) {
    if (!doc["meta"].is_object()) throw InputError("pool file: 'meta' must be an object");
    for (const auto& [key, value] : doc["meta"].items()) {
      if (!value.is_string()) throw InputError("pool file: meta values must be strings");
      meta[key] = value.get<std::string>();
    }
  }

  try {
    return ReferencePool::from_scores(std::move(scores), rule, std::move(meta));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("pool file: ") + e.what());
  }
}

}  // namespace

std::string pool_to_json(const ReferencePool& pool) {
  nlohmann::json doc;
  doc["scores"] = pool.scores();
  doc["rule"] = {{"q", pool.rule().q}};
  doc["meta"] = nlohmann::json::object();
  for (const auto& [key, value] : pool.meta()) doc["meta"][key] = value;
  return doc.dump(2);
}

ReferencePool pool_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("pool file: ") + e.what());
  }
  return pool_from_parsed(doc);
}

void save_pool(const ReferencePool& pool, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out << pool_to_json(pool) << '\n';
  if (!out) throw InputError("failed while writing '" + path + "'");
}

ReferencePool load_pool(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open pool file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return pool_from_json(buf.str());
}

}  // namespace relgate
