#include "relgate/cohort.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "relgate/baselines.hpp"
#include "relgate/errors.hpp"

namespace relgate {

namespace {

using nlohmann::json;

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string cell(const std::optional<double>& v) {
  return v ? fmt6(*v) : "---";
}

ReleaseOutcome run_method(const MethodConfig& method, double alpha,
                          const Trajectory& trajectory, const ReferencePool& pool,
                          const BettingCalibrator& cal, int t_max) {
  switch (method.kind) {
    case MethodKind::ours:
      return run_wrapper(trajectory, pool, cal, alpha, t_max);
    case MethodKind::first_p:
      return first_p_rule(trajectory, pool, alpha, t_max);
    case MethodKind::entropy:
      return entropy_rule(trajectory, method.entropy_threshold, t_max);
    case MethodKind::stability:
      return stability_rule(trajectory, method.n_test, t_max);
  }
  throw InvariantError("evaluate_cohort: unknown method kind");
}

}  // namespace

std::string method_name(MethodKind kind) {
  switch (kind) {
    case MethodKind::ours:
      return "ours";
    case MethodKind::first_p:
      return "first_p";
    case MethodKind::entropy:
      return "entropy";
    case MethodKind::stability:
      return "stability";
  }
  throw InvariantError("method_name: unknown method kind");
}

MethodKind method_from_name(const std::string& name) {
  if (name == "ours") return MethodKind::ours;
  if (name == "first_p" || name == "first-p") return MethodKind::first_p;
  if (name == "entropy") return MethodKind::entropy;
  if (name == "stability") return MethodKind::stability;
  throw std::invalid_argument("unknown method '" + name + "'");
}

CohortReport evaluate_cohort(std::span<const Trajectory> trajectories,
                             std::span<const MethodConfig> methods,
                             const ReferencePool& pool,
                             const BettingCalibrator& cal,
                             std::span<const double> alphas, int t_max) {
  if (t_max < 1) throw std::invalid_argument("evaluate_cohort: t_max must be >= 1");

  std::vector<bool> feasible_flags;
  feasible_flags.reserve(trajectories.size());
  CohortReport report;
  report.t_max = t_max;
  for (const auto& trajectory : trajectories) {
    auto feasible = trajectory.feasibility();
    if (!feasible)
      throw std::invalid_argument("evaluate_cohort: trajectory '" +
                                  trajectory.task_id +
                                  "' has no feasibility label and none is derivable");
    feasible_flags.push_back(*feasible);
    if (*feasible)
      ++report.n1;
    else
      ++report.n0;
  }

  auto evaluate_one = [&](const MethodConfig& method,
                          std::optional<double> alpha) {
    MethodMetrics row;
    row.method = method.kind;
    row.alpha = alpha;

    std::size_t f0_released = 0, f1_released = 0, f1_failures = 0;
    long long f0_step_sum = 0, f1_step_sum = 0;

    for (std::size_t i = 0; i < trajectories.size(); ++i) {
      const auto& trajectory = trajectories[i];
      ReleaseOutcome outcome =
          run_method(method, alpha.value_or(0.5), trajectory, pool, cal, t_max);
      if (!outcome.released()) continue;
      const int step = *outcome.release_step;
      if (feasible_flags[i]) {
        ++f1_released;
        f1_step_sum += step;
        const auto& correct = trajectory.steps[step - 1].correct;
        if (!correct)
          throw std::invalid_argument(
              "evaluate_cohort: trajectory '" + trajectory.task_id +
              "' lacks a correctness label at its released step");
        if (!*correct) ++f1_failures;
      } else {
        ++f0_released;
        f0_step_sum += step;
      }
    }

    if (report.n0 > 0) {
      row.f0_release_rate = static_cast<double>(f0_released) /
                            static_cast<double>(report.n0);
      if (f0_released > 0)
        row.f0_mean_release_step = static_cast<double>(f0_step_sum) /
                                   static_cast<double>(f0_released);
    }
    if (report.n1 > 0) {
      row.f1_release_rate = static_cast<double>(f1_released) /
                            static_cast<double>(report.n1);
      if (f1_released > 0) {
        row.f1_failure_given_release = static_cast<double>(f1_failures) /
                                       static_cast<double>(f1_released);
        row.f1_mean_release_step = static_cast<double>(f1_step_sum) /
                                   static_cast<double>(f1_released);
      }
    }
    report.rows.push_back(row);
  };

  for (const auto& method : methods) {
    if (method.uses_alpha()) {
      if (alphas.empty())
        throw std::invalid_argument("evaluate_cohort: no alpha levels supplied");
      for (double alpha : alphas) evaluate_one(method, alpha);
    } else {
      evaluate_one(method, std::nullopt);
    }
  }
  return report;
}

std::string emit_report(const CohortReport& report, ReportFormat format) {
  if (format == ReportFormat::machine) {
    json doc;
    doc["n0"] = report.n0;
    doc["n1"] = report.n1;
    doc["t_max"] = report.t_max;
    doc["rows"] = json::array();
    for (const auto& row : report.rows) {
      json r;
      r["method"] = method_name(row.method);
      r["alpha"] = row.alpha ? json(*row.alpha) : json(nullptr);
      auto put = [&r](const char* key, const std::optional<double>& v) {
        r[key] = v ? json(*v) : json(nullptr);
      };
      put("f0_release_rate", row.f0_release_rate);
      put("f0_mean_release_step", row.f0_mean_release_step);
      put("f1_release_rate", row.f1_release_rate);
      put("f1_failure_given_release", row.f1_failure_given_release);
      put("f1_mean_release_step", row.f1_mean_release_step);
      doc["rows"].push_back(r);
    }
    return doc.dump();
  }

  std::ostringstream out;
  out << "cohort: n0=" << report.n0 << " n1=" << report.n1
      << " t_max=" << report.t_max << "\n";
  out << "method     alpha    F0:release  F0:step     F1:release  F1:fail|rel F1:step\n";
  for (const auto& row : report.rows) {
    char line[256];
    std::snprintf(line, sizeof(line), "%-10s %-8s %-11s %-11s %-11s %-11s %s\n",
                  method_name(row.method).c_str(), cell(row.alpha).c_str(),
                  cell(row.f0_release_rate).c_str(),
                  cell(row.f0_mean_release_step).c_str(),
                  cell(row.f1_release_rate).c_str(),
                  cell(row.f1_failure_given_release).c_str(),
                  cell(row.f1_mean_release_step).c_str());
    out << line;
  }
  return out.str();
}

CohortReport parse_report(const std::string& machine_doc) {
  json doc;
  try {
    doc = json::parse(machine_doc);
  } catch (const json::exception& e) {
    throw InputError(std::string("report document: ") + e.what());
  }
  try {
    CohortReport report;
    report.n0 = doc.at("n0").get<std::size_t>();
    report.n1 = doc.at("n1").get<std::size_t>();
    report.t_max = doc.at("t_max").get<int>();
    for (const auto& r : doc.at("rows")) {
      MethodMetrics row;
      row.method = method_from_name(r.at("method").get<std::string>());
      auto get = [&r](const char* key) -> std::optional<double> {
        const auto& v = r.at(key);
        if (v.is_null()) return std::nullopt;
        return v.get<double>();
      };
      row.alpha = get("alpha");
      row.f0_release_rate = get("f0_release_rate");
      row.f0_mean_release_step = get("f0_mean_release_step");
      row.f1_release_rate = get("f1_release_rate");
      row.f1_failure_given_release = get("f1_failure_given_release");
      row.f1_mean_release_step = get("f1_mean_release_step");
      report.rows.push_back(row);
    }
    return report;
  } catch (const json::exception& e) {
    throw InputError(std::string("report document: ") + e.what());
  }
}

}  // namespace relgate
