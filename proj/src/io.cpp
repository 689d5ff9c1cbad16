#include "relgate/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <string>

#include <json.hpp>

#include "relgate/errors.hpp"

namespace relgate {

namespace {

using nlohmann::json;

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

json parse_record(const std::string& line, std::size_t line_no) {
  json record;
  try {
    record = json::parse(line);
  } catch (const json::exception& e) {
    throw InputError("line " + std::to_string(line_no) + ": " + e.what());
  }
  if (!record.is_object())
    throw InputError("line " + std::to_string(line_no) + ": record must be an object");
  return record;
}

std::string require_string(const json& record, const char* field, std::size_t line_no) {
  if (!record.contains(field) || !record[field].is_string())
    throw InputError("line " + std::to_string(line_no) + ": missing string field '" +
                     field + "'");
  return record[field].get<std::string>();
}

double require_finite_number(const json& record, const char* field,
                             std::size_t line_no) {
  if (!record.contains(field) || !record[field].is_number())
    throw InputError("line " + std::to_string(line_no) + ": missing numeric field '" +
                     field + "'");
  double v = record[field].get<double>();
  if (!std::isfinite(v))
    throw InputError("line " + std::to_string(line_no) + ": non-finite '" + field + "'");
  return v;
}

}  // namespace

std::vector<Trajectory> load_trajectories(std::istream& in) {
  struct Builder {
    Trajectory trajectory;
    bool feasible_set = false;
  };
  std::vector<std::string> order;
  std::map<std::string, Builder> builders;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    json record = parse_record(line, line_no);

    std::string task_id = require_string(record, "task_id", line_no);
    if (!record.contains("step") || !record["step"].is_number_integer())
      throw InputError("line " + std::to_string(line_no) +
                       ": missing integer field 'step'");
    int step = record["step"].get<int>();
    if (step < 1)
      throw InputError("line " + std::to_string(line_no) + ": step must be >= 1");
    double score = require_finite_number(record, "score", line_no);

    TrajectoryStep ts;
    ts.step = step;
    ts.score = score;
    if (record.contains("correct")) {
      if (!record["correct"].is_boolean())
        throw InputError("line " + std::to_string(line_no) + ": 'correct' must be a boolean");
      ts.correct = record["correct"].get<bool>();
    }
    if (record.contains("entropy")) {
      double h = require_finite_number(record, "entropy", line_no);
      if (h < 0.0)
        throw InputError("line " + std::to_string(line_no) + ": 'entropy' must be >= 0");
      ts.entropy = h;
    }

    auto [it, inserted] = builders.try_emplace(task_id);
    if (inserted) {
      it->second.trajectory.task_id = task_id;
      order.push_back(task_id);
    }
    Builder& b = it->second;

    if (record.contains("feasible")) {
      if (!record["feasible"].is_boolean())
        throw InputError("line " + std::to_string(line_no) + ": 'feasible' must be a boolean");
      bool f = record["feasible"].get<bool>();
      if (b.feasible_set && *b.trajectory.feasible != f)
        throw InputError("line " + std::to_string(line_no) +
                         ": conflicting 'feasible' flags for task '" + task_id + "'");
      b.trajectory.feasible = f;
      b.feasible_set = true;
    }
    b.trajectory.steps.push_back(ts);
  }

  std::vector<Trajectory> out;
  out.reserve(order.size());
  for (const auto& task_id : order) {
    Trajectory& t = builders[task_id].trajectory;
    std::sort(t.steps.begin(), t.steps.end(),
              [](const TrajectoryStep& a, const TrajectoryStep& b) {
                return a.step < b.step;
              });
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
      int expected = static_cast<int>(i) + 1;
      if (t.steps[i].step == expected) continue;
      if (i > 0 && t.steps[i].step == t.steps[i - 1].step)
        throw InputError("task '" + task_id + "': duplicate step " +
                         std::to_string(t.steps[i].step));
      throw InputError("task '" + task_id + "': step gap, expected step " +
                       std::to_string(expected) + " but found " +
                       std::to_string(t.steps[i].step));
    }
    if (!t.feasible) t.feasible = t.feasibility();
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<Trajectory> load_trajectories_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open trajectory file '" + path + "'");
  return load_trajectories(in);
}

std::vector<ScoredCandidate> load_candidates(std::istream& in) {
  std::vector<ScoredCandidate> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    json record = parse_record(line, line_no);

    ScoredCandidate cand;
    cand.task_id = require_string(record, "task_id", line_no);
    cand.score = require_finite_number(record, "score", line_no);
    if (!record.contains("adjudication"))
      throw InputError("line " + std::to_string(line_no) +
                       ": missing field 'adjudication'");
    const json& adj = record["adjudication"];
    if (adj.is_boolean()) {
      cand.adjudged_correct = adj.get<bool>();
    } else if (adj.is_number_integer() &&
               (adj.get<int>() == 0 || adj.get<int>() == 1)) {
      cand.adjudged_correct = adj.get<int>() == 1;
    } else {
      throw InputError("line " + std::to_string(line_no) +
                       ": 'adjudication' must be 0, 1, or a boolean");
    }
    out.push_back(std::move(cand));
  }
  return out;
}

std::vector<ScoredCandidate> load_candidates_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open candidate file '" + path + "'");
  return load_candidates(in);
}

}  // namespace relgate
