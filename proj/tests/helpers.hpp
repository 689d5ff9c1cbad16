#pragma once

// Shared fixtures for the unit and acceptance suites: a synthetic reference
// pool with the reference rank structure, the three worked trajectories, and
// small builders.

#include <optional>
#include <string>
#include <vector>

#include "relgate/pool.hpp"
#include "relgate/trajectory.hpp"

namespace testutil {

// 170 hard negatives realizing ge-counts 24 at score 1.0, 36 at 0.967 and 50
// at 0.867: 24 x 1.0, 12 x 0.967, 14 x 0.9, then 120 distinct values below
// 0.867 so that mid-pool ranks are realizable too.
inline std::vector<double> table_pool_scores() {
  std::vector<double> scores;
  scores.insert(scores.end(), 24, 1.0);
  scores.insert(scores.end(), 12, 0.967);
  scores.insert(scores.end(), 14, 0.9);
  for (int j = 0; j < 120; ++j) scores.push_back(0.86 - 0.005 * j);
  return scores;
}

inline relgate::ReferencePool table_pool() {
  return relgate::ReferencePool::from_scores(table_pool_scores(),
                                             relgate::UpperTailRule{0.55});
}

// A 309-score incorrect bank whose top-55% cut retains exactly 170 scores and
// whose top-65% cut retains 207 (ties at the 201st rank extend to 207).
inline std::vector<relgate::ScoredCandidate> bank_309() {
  std::vector<relgate::ScoredCandidate> bank;
  auto add = [&bank](double score) {
    bank.push_back({"bank/" + std::to_string(bank.size()), score, false});
  };
  for (double s : table_pool_scores()) add(s);   // ranks 1..170
  for (int j = 0; j < 37; ++j) add(0.26);        // ranks 171..207, tied
  for (int j = 0; j < 102; ++j) add(0.25 - 0.001 * j);
  return bank;
}

inline relgate::Trajectory make_trajectory(
    std::string task_id, const std::vector<double>& scores,
    const std::vector<int>& correct = {},
    const std::vector<double>& entropies = {}) {
  relgate::Trajectory t;
  t.task_id = std::move(task_id);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    relgate::TrajectoryStep step;
    step.step = static_cast<int>(i) + 1;
    step.score = scores[i];
    if (!correct.empty()) step.correct = correct[i] != 0;
    if (!entropies.empty()) step.entropy = entropies[i];
    t.steps.push_back(step);
  }
  return t;
}

// Persistent verifier deception: ten incorrect steps at score 0.967.
inline relgate::Trajectory deceptive_stream() {
  return make_trajectory("Mbpp/74", std::vector<double>(10, 0.967),
                         std::vector<int>(10, 0));
}

// Delayed correct release: one incorrect 0.867 step, then nine correct 1.0s.
inline relgate::Trajectory delayed_stream() {
  std::vector<double> scores{0.867, 1, 1, 1, 1, 1, 1, 1, 1, 1};
  std::vector<int> correct{0, 1, 1, 1, 1, 1, 1, 1, 1, 1};
  return make_trajectory("Mbpp/598", scores, correct);
}

// Oscillating feasible trajectory: correct 1.0 steps interleaved with
// incorrect 0.967 ones.
inline relgate::Trajectory oscillating_stream() {
  std::vector<double> scores{1, 0.967, 0.967, 0.967, 1, 0.967, 1, 0.967, 1, 1};
  std::vector<int> correct{1, 0, 0, 0, 1, 0, 1, 0, 1, 1};
  return make_trajectory("Mbpp/643", scores, correct);
}

}  // namespace testutil
