#pragma once

#include <optional>
#include <string>
#include <vector>

namespace relgate {

// One step of an online evidence stream: the verifier score, and the
// hidden-oracle correctness label and mean token entropy when available.
struct TrajectoryStep {
  int step = 0;  // 1-based, consecutive within a task
  double score = 0.0;
  std::optional<bool> correct;
  std::optional<double> entropy;
};

// Per-task score stream. `feasible` is the empirical feasibility label; when
// absent and every step carries a correctness label it is derived as "some
// step is correct".
struct Trajectory {
  std::string task_id;
  std::vector<TrajectoryStep> steps;
  std::optional<bool> feasible;

  bool fully_labeled() const {
    for (const auto& s : steps)
      if (!s.correct) return false;
    return true;
  }

  // Explicit label if present, otherwise derived from step labels.
  std::optional<bool> feasibility() const {
    if (feasible) return feasible;
    if (!fully_labeled() || steps.empty()) return std::nullopt;
    for (const auto& s : steps)
      if (*s.correct) return true;
    return false;
  }
};

}  // namespace relgate
