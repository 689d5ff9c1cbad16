#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relgate/evidence.hpp"
#include "relgate/pool.hpp"
#include "relgate/trajectory.hpp"

namespace relgate {

enum class MethodKind { ours, first_p, entropy, stability };

std::string method_name(MethodKind kind);
MethodKind method_from_name(const std::string& name);

struct MethodConfig {
  MethodKind kind = MethodKind::ours;
  double entropy_threshold = 0.0;  // entropy rule only
  int n_test = 30;                 // stability rule only

  bool uses_alpha() const {
    return kind == MethodKind::ours || kind == MethodKind::first_p;
  }
};

// One row of the held-out table: a method (at one alpha, when the method uses
// one) evaluated on the cohort split by empirical feasibility. On the
// infeasible side every release is an error, so the release rate IS the
// false-release rate. Absent optionals mean "no task qualified" and render
// as "---" in table form.
struct MethodMetrics {
  MethodKind method = MethodKind::ours;
  std::optional<double> alpha;

  std::optional<double> f0_release_rate;  // absent iff n0 == 0
  std::optional<double> f0_mean_release_step;
  std::optional<double> f1_release_rate;  // absent iff n1 == 0
  std::optional<double> f1_failure_given_release;
  std::optional<double> f1_mean_release_step;
};

struct CohortReport {
  std::size_t n0 = 0;
  std::size_t n1 = 0;
  int t_max = 0;
  std::vector<MethodMetrics> rows;
};

// Runs every configured method (alpha-dependent ones once per alpha) on every
// trajectory and aggregates. All metrics reduce from integer counts, so the
// report is independent of trajectory order. Every trajectory must have a
// feasibility label, given or derivable; failure-given-release additionally
// needs a correctness label at each released step on the feasible side.
CohortReport evaluate_cohort(std::span<const Trajectory> trajectories,
                             std::span<const MethodConfig> methods,
                             const ReferencePool& pool,
                             const BettingCalibrator& cal,
                             std::span<const double> alphas, int t_max);

enum class ReportFormat { table, machine };

// Table form uses 6 significant digits and "---" for absent metrics. Machine
// form is a lossless JSON document; emit(parse(doc)) is byte-identical.
std::string emit_report(const CohortReport& report, ReportFormat format);
CohortReport parse_report(const std::string& machine_doc);

}  // namespace relgate
