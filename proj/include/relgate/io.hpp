#pragma once

#include <istream>
#include <string>
#include <vector>

#include "relgate/pool.hpp"
#include "relgate/trajectory.hpp"

namespace relgate {

// Trajectory files are line-delimited JSON, one record per line:
//   {"task_id": str, "step": int, "score": num,
//    "correct": bool?, "entropy": num?, "feasible": bool?}
// Records are grouped by task_id (first-appearance order preserved) and
// sorted by step; steps must be 1..L with no gaps or duplicates, and a task's
// feasible flags must agree. Feasibility is derived from complete correctness
// labels when no explicit flag is present. Blank lines are skipped.
std::vector<Trajectory> load_trajectories(std::istream& in);
std::vector<Trajectory> load_trajectories_file(const std::string& path);

// Candidate banks are line-delimited JSON as well:
//   {"task_id": str, "score": num, "adjudication": 0|1 or bool}
std::vector<ScoredCandidate> load_candidates(std::istream& in);
std::vector<ScoredCandidate> load_candidates_file(const std::string& path);

}  // namespace relgate
