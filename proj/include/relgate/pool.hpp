#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace relgate {

// One adjudicated offline candidate: the task it belongs to, the online
// verifier score it received, and the stronger offline adjudicator's verdict.
struct ScoredCandidate {
  std::string task_id;
  double score = 0.0;
  bool adjudged_correct = false;
};

// Upper-tail selection rule: keep the top fraction q of incorrect scores,
// ties at the cutoff included.
struct UpperTailRule {
  double q = 1.0;

  friend bool operator==(const UpperTailRule&, const UpperTailRule&) = default;
};

// Immutable multiset of hard-negative scores, kept sorted non-increasing.
// Every online score is rank-calibrated against this pool; the metadata is
// provenance only and never enters any computation.
class ReferencePool {
 public:
  using Meta = std::map<std::string, std::string>;

  static ReferencePool from_scores(std::vector<double> scores,
                                   UpperTailRule rule = {1.0}, Meta meta = {});

  const std::vector<double>& scores() const { return scores_; }
  std::size_t size() const { return scores_.size(); }
  const UpperTailRule& rule() const { return rule_; }
  const Meta& meta() const { return meta_; }
  double max_score() const { return scores_.front(); }
  double min_score() const { return scores_.back(); }

  friend bool operator==(const ReferencePool&, const ReferencePool&) = default;

 private:
  ReferencePool() = default;

  std::vector<double> scores_;  // non-increasing, non-empty, all finite
  UpperTailRule rule_;
  Meta meta_;
};

struct PoolDiagnostic {
  std::vector<double> grid;  // ascending levels in [0, 1]
  std::vector<double> ecdf;  // fraction of held-out p-values <= grid[i]
  double mean_p = 0.0;
  double slack = 0.0;
  bool pass = false;  // ecdf[i] <= grid[i] + slack at every level
};

// Filters the candidates to the incorrect ones and keeps the upper fraction
// rule.q of their scores. The cutoff is the ceil(q * n_incorrect)-th largest
// incorrect score and every score >= the cutoff is retained, so the result
// can exceed ceil(q * n_incorrect) when the cutoff value is tied.
ReferencePool collect_hard_negatives(std::span<const ScoredCandidate> candidates,
                                     UpperTailRule rule,
                                     ReferencePool::Meta meta = {});

// Calibrates every held-out score against the pool and compares the empirical
// CDF of the resulting p-values with the diagonal at each grid level. A
// conservative pool keeps the CDF at or below the diagonal.
PoolDiagnostic pool_diagnostic(const ReferencePool& pool,
                               std::span<const double> heldout_scores,
                               std::span<const double> grid, double slack = 0.0);

// Pool file format: a JSON object with "scores" (array of numbers, any order;
// canonicalized to descending on load), "rule" ({"q": number}), and "meta"
// (object with string values). Round trips are lossless.
void save_pool(const ReferencePool& pool, const std::string& path);
ReferencePool load_pool(const std::string& path);
std::string pool_to_json(const ReferencePool& pool);
ReferencePool pool_from_json(const std::string& text);

}  // namespace relgate
