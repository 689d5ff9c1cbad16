// relgate: command-line front end for the release wrapper library.
//
// Subcommands: build-pool, diagnose-pool, run, evaluate, gain, simulate,
// bounds. Exit codes: 0 success, 1 usage error, 2 malformed input,
// 3 internal invariant violation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relgate/baselines.hpp"
#include "relgate/calibrate.hpp"
#include "relgate/cohort.hpp"
#include "relgate/errors.hpp"
#include "relgate/evidence.hpp"
#include "relgate/gain.hpp"
#include "relgate/io.hpp"
#include "relgate/oracles.hpp"
#include "relgate/pool.hpp"

namespace {

using nlohmann::json;
using namespace relgate;

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw InputError("cannot open '" + out_path + "' for writing");
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
}

ReportFormat parse_format(const std::string& name) {
  if (name == "table") return ReportFormat::table;
  if (name == "machine") return ReportFormat::machine;
  throw std::invalid_argument("unknown format '" + name + "'");
}

struct CommonOpts {
  double alpha = 0.1;
  double eta = 0.7;
  double trunc = 10.0;
  int t_max = 10;
  std::string format = "table";
  std::string out;
};

ReferencePool::Meta parse_meta(const std::vector<std::string>& entries) {
  ReferencePool::Meta meta;
  for (const auto& entry : entries) {
    auto eq = entry.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--meta entries must look like key=value");
    meta[entry.substr(0, eq)] = entry.substr(eq + 1);
  }
  return meta;
}

int cmd_build_pool(const std::string& candidates_path, double q,
                   const std::vector<std::string>& meta_entries,
                   const std::string& out_path) {
  auto candidates = load_candidates_file(candidates_path);
  auto meta = parse_meta(meta_entries);
  meta.try_emplace("source", candidates_path);
  ReferencePool pool =
      collect_hard_negatives(candidates, UpperTailRule{q}, std::move(meta));
  if (out_path.empty()) {
    std::cout << pool_to_json(pool) << '\n';
  } else {
    save_pool(pool, out_path);
    std::cerr << "pool of " << pool.size() << " hard negatives written to '"
              << out_path << "'\n";
  }
  return 0;
}

int cmd_diagnose_pool(const std::string& pool_path, const std::string& heldout_path,
                      const std::vector<double>& grid, double slack,
                      const std::string& format, const std::string& out_path) {
  ReferencePool pool = load_pool(pool_path);
  auto heldout = load_candidates_file(heldout_path);
  std::vector<double> scores;
  for (const auto& c : heldout)
    if (!c.adjudged_correct) scores.push_back(c.score);
  if (scores.empty())
    throw InputError("held-out file '" + heldout_path +
                     "' contains no incorrect candidates");

  PoolDiagnostic diag = pool_diagnostic(pool, scores, grid, slack);

  if (parse_format(format) == ReportFormat::machine) {
    json doc;
    doc["n"] = pool.size();
    doc["heldout"] = scores.size();
    doc["grid"] = diag.grid;
    doc["ecdf"] = diag.ecdf;
    doc["mean_p"] = diag.mean_p;
    doc["slack"] = diag.slack;
    doc["pass"] = diag.pass;
    write_output(doc.dump(), out_path);
    return 0;
  }

  std::ostringstream text;
  text << "pool n=" << pool.size() << "  heldout=" << scores.size()
       << "  slack=" << fmt6(slack) << "\n";
  text << "level     ecdf      at-or-below\n";
  for (std::size_t i = 0; i < diag.grid.size(); ++i) {
    bool ok = diag.ecdf[i] <= diag.grid[i] + slack;
    char line[128];
    std::snprintf(line, sizeof(line), "%-9s %-9s %s\n", fmt6(diag.grid[i]).c_str(),
                  fmt6(diag.ecdf[i]).c_str(), ok ? "yes" : "NO");
    text << line;
  }
  text << "mean p = " << fmt6(diag.mean_p) << "\n";
  text << (diag.pass ? "PASS" : "FAIL")
       << ": empirical CDF must sit at or below the diagonal\n";
  write_output(text.str(), out_path);
  return 0;
}

const Trajectory& select_task(const std::vector<Trajectory>& trajectories,
                              const std::string& task) {
  if (trajectories.empty()) throw InputError("trajectory file is empty");
  if (task.empty()) {
    if (trajectories.size() > 1)
      throw std::invalid_argument(
          "trajectory file holds " + std::to_string(trajectories.size()) +
          " tasks; pick one with --task");
    return trajectories.front();
  }
  for (const auto& t : trajectories)
    if (t.task_id == task) return t;
  throw InputError("task '" + task + "' not found in the trajectory file");
}

int cmd_run(const std::string& trajectories_path, const std::string& pool_path,
            const std::string& task, const std::string& method_name_arg,
            double entropy_threshold, bool entropy_threshold_set, int n_test,
            const CommonOpts& common) {
  auto trajectories = load_trajectories_file(trajectories_path);
  const Trajectory& trajectory = select_task(trajectories, task);
  MethodKind kind = method_from_name(method_name_arg);

  std::optional<ReferencePool> pool;
  if (kind == MethodKind::ours || kind == MethodKind::first_p) {
    if (pool_path.empty())
      throw std::invalid_argument("--pool is required for calibrated methods");
    pool = load_pool(pool_path);
  }

  ReleaseOutcome outcome;
  switch (kind) {
    case MethodKind::ours: {
      BettingCalibrator cal(common.eta, common.trunc);
      outcome = run_wrapper(trajectory, *pool, cal, common.alpha, common.t_max);
      break;
    }
    case MethodKind::first_p:
      outcome = first_p_rule(trajectory, *pool, common.alpha, common.t_max);
      break;
    case MethodKind::entropy:
      if (!entropy_threshold_set)
        throw std::invalid_argument("--entropy-threshold is required for the entropy rule");
      outcome = entropy_rule(trajectory, entropy_threshold, common.t_max);
      break;
    case MethodKind::stability:
      outcome = stability_rule(trajectory, n_test, common.t_max);
      break;
  }

  if (parse_format(common.format) == ReportFormat::machine) {
    json doc;
    doc["task_id"] = trajectory.task_id;
    doc["method"] = method_name(kind);
    if (kind == MethodKind::ours || kind == MethodKind::first_p)
      doc["alpha"] = common.alpha;
    doc["decision"] = outcome.released() ? "released" : "abstained";
    doc["release_step"] =
        outcome.release_step ? json(*outcome.release_step) : json(nullptr);
    doc["scores"] = json::array();
    for (const auto& s : trajectory.steps) doc["scores"].push_back(s.score);
    if (!outcome.p_trace.empty()) {
      doc["p"] = json::array();
      for (const auto& p : outcome.p_trace) doc["p"].push_back(p.value());
    }
    if (!outcome.wealth_trace.empty()) doc["wealth"] = outcome.wealth_trace;
    write_output(doc.dump(), common.out);
    return 0;
  }

  std::ostringstream text;
  text << "task " << trajectory.task_id << "  method " << method_name(kind);
  if (kind == MethodKind::ours)
    text << "  alpha " << fmt6(common.alpha) << "  threshold "
         << fmt6(ville_threshold(common.alpha));
  else if (kind == MethodKind::first_p)
    text << "  alpha " << fmt6(common.alpha);
  text << "\n";

  const std::size_t shown =
      std::min<std::size_t>(trajectory.steps.size(),
                            static_cast<std::size_t>(common.t_max));
  text << "step  score      ";
  if (!outcome.p_trace.empty()) text << "p          ";
  if (!outcome.wealth_trace.empty()) text << "wealth     ";
  text << "\n";
  for (std::size_t i = 0; i < shown; ++i) {
    char head[64];
    std::snprintf(head, sizeof(head), "%-5zu %-10s ", i + 1,
                  fmt6(trajectory.steps[i].score).c_str());
    text << head;
    if (i < outcome.p_trace.size()) {
      char cell[32];
      std::snprintf(cell, sizeof(cell), "%-10s ",
                    fmt6(outcome.p_trace[i].value()).c_str());
      text << cell;
    }
    if (i < outcome.wealth_trace.size()) {
      char cell[32];
      std::snprintf(cell, sizeof(cell), "%-10s ",
                    fmt6(outcome.wealth_trace[i]).c_str());
      text << cell;
    }
    if (outcome.release_step && *outcome.release_step == static_cast<int>(i) + 1)
      text << "<- release";
    text << "\n";
  }
  if (outcome.released())
    text << "released at step " << *outcome.release_step << "\n";
  else
    text << "abstained\n";
  write_output(text.str(), common.out);
  return 0;
}

int cmd_evaluate(const std::string& trajectories_path, const std::string& pool_path,
                 std::vector<double> alphas, double entropy_threshold,
                 bool entropy_threshold_set, int n_test, const CommonOpts& common) {
  auto trajectories = load_trajectories_file(trajectories_path);
  ReferencePool pool = load_pool(pool_path);
  BettingCalibrator cal(common.eta, common.trunc);
  if (alphas.empty()) alphas.push_back(common.alpha);

  std::vector<MethodConfig> methods;
  methods.push_back({MethodKind::first_p, 0.0, n_test});
  methods.push_back({MethodKind::ours, 0.0, n_test});
  if (entropy_threshold_set)
    methods.push_back({MethodKind::entropy, entropy_threshold, n_test});
  methods.push_back({MethodKind::stability, 0.0, n_test});

  CohortReport report =
      evaluate_cohort(trajectories, methods, pool, cal, alphas, common.t_max);
  write_output(emit_report(report, parse_format(common.format)), common.out);
  return 0;
}

int cmd_gain(const std::string& trajectories_path, const std::string& pool_path,
             const CommonOpts& common) {
  auto trajectories = load_trajectories_file(trajectories_path);
  ReferencePool pool = load_pool(pool_path);
  BettingCalibrator cal(common.eta, common.trunc);

  // Truncate to the horizon so the tables line up with the release setting.
  std::vector<Trajectory> cohort;
  for (auto t : trajectories) {
    if (t.steps.size() > static_cast<std::size_t>(common.t_max))
      t.steps.resize(common.t_max);
    cohort.push_back(std::move(t));
  }

  std::vector<Trajectory> feasible;
  for (const auto& t : cohort)
    if (t.feasibility().value_or(false)) feasible.push_back(t);

  if (parse_format(common.format) == ReportFormat::machine) {
    json doc;
    doc["alpha"] = common.alpha;
    doc["tasks"] = json::array();
    for (const auto& t : cohort) {
      GainTrace trace = gain_decomposition(t, pool, cal, common.alpha);
      json row;
      row["task_id"] = t.task_id;
      row["gain"] = trace.cum_gain.back();
      row["correct_gain"] = trace.cum_correct_gain.back();
      row["required"] = trace.required.back();
      row["margin"] = trace.margin;
      row["margin_plus"] = trace.margin_plus;
      row["release_equivalent"] = trace.release_equivalent;
      doc["tasks"].push_back(row);
    }
    if (!feasible.empty()) {
      auto summary = stepwise_feasible_summary(feasible, pool, cal, common.alpha);
      doc["stepwise"] = json::array();
      for (std::size_t t = 0; t < summary.steps.size(); ++t) {
        const auto& s = summary.steps[t];
        json row;
        row["step"] = t + 1;
        row["correct_fraction"] = s.correct_fraction;
        row["mean_correct_gain"] =
            s.mean_correct_gain ? json(*s.mean_correct_gain) : json(nullptr);
        row["mean_correct_contrib"] = s.mean_correct_contrib;
        row["cum_correct_contrib"] = s.cum_correct_contrib;
        row["required"] = s.required;
        doc["stepwise"].push_back(row);
      }
    }
    write_output(doc.dump(), common.out);
    return 0;
  }

  std::ostringstream text;
  text << "per-task gain decomposition (alpha " << fmt6(common.alpha) << ")\n";
  text << "task            G_T        G_T+       A_T        margin     margin+\n";
  for (const auto& t : cohort) {
    GainTrace trace = gain_decomposition(t, pool, cal, common.alpha);
    char line[192];
    std::snprintf(line, sizeof(line), "%-15s %-10s %-10s %-10s %-10s %s\n",
                  t.task_id.c_str(), fmt6(trace.cum_gain.back()).c_str(),
                  fmt6(trace.cum_correct_gain.back()).c_str(),
                  fmt6(trace.required.back()).c_str(), fmt6(trace.margin).c_str(),
                  fmt6(trace.margin_plus).c_str());
    text << line;
  }
  if (!feasible.empty()) {
    auto summary = stepwise_feasible_summary(feasible, pool, cal, common.alpha);
    text << "\nstepwise feasible-side decomposition (" << feasible.size()
         << " tasks)\n";
    text << "step  pi_hat     zbar       E[YZ]      cum        A\n";
    for (std::size_t t = 0; t < summary.steps.size(); ++t) {
      const auto& s = summary.steps[t];
      char line[192];
      std::snprintf(line, sizeof(line), "%-5zu %-10s %-10s %-10s %-10s %s\n",
                    t + 1, fmt6(s.correct_fraction).c_str(),
                    s.mean_correct_gain ? fmt6(*s.mean_correct_gain).c_str() : "---",
                    fmt6(s.mean_correct_contrib).c_str(),
                    fmt6(s.cum_correct_contrib).c_str(), fmt6(s.required).c_str());
      text << line;
    }
  }
  write_output(text.str(), common.out);
  return 0;
}

std::string report_text(const BoundReport& report, const std::string& label,
                        const std::string& direction) {
  std::ostringstream text;
  text << label << "\n";
  text << "empirical = " << fmt6(report.empirical) << " (stderr "
       << fmt6(report.std_error) << ")\n";
  text << "bound     = " << fmt6(report.bound) << " (" << direction << ")\n";
  text << (report.satisfied ? "SATISFIED" : "VIOLATED") << "\n";
  return text.str();
}

json report_json(const BoundReport& report) {
  json doc;
  doc["empirical"] = report.empirical;
  doc["std_error"] = report.std_error;
  doc["bound"] = report.bound;
  doc["satisfied"] = report.satisfied;
  return doc;
}

int cmd_simulate(const std::string& kind, NullSimConfig cfg, double hit_rate,
                 const std::string& pool_path, const std::string& pool_law,
                 const std::string& stream_law, const CommonOpts& common) {
  cfg.alpha = common.alpha;
  cfg.pool_law = ScoreLaw::parse(pool_law);
  cfg.stream_law = ScoreLaw::parse(stream_law);
  cfg.horizon = common.t_max;

  BoundReport report;
  std::string label;
  std::string direction;
  if (kind == "null") {
    BettingCalibrator cal(common.eta, common.trunc);
    std::optional<ReferencePool> pool_override;
    if (!pool_path.empty()) pool_override = load_pool(pool_path);
    report = simulate_null(cfg, cal,
                           pool_override ? &*pool_override : nullptr);
    label = cfg.drift_eps > 0.0
                ? "false-release rate under calibration drift (eps " +
                      fmt6(cfg.drift_eps) + ")"
                : "false-release rate under the null";
    direction = "upper";
  } else if (kind == "naive") {
    report = simulate_naive(cfg, hit_rate);
    label = "crossing rate of repeated one-step thresholding";
    direction = "lower";
  } else {
    throw std::invalid_argument("unknown simulation kind '" + kind + "'");
  }

  if (parse_format(common.format) == ReportFormat::machine) {
    json doc = report_json(report);
    doc["kind"] = kind;
    doc["reps"] = cfg.reps;
    doc["horizon"] = cfg.horizon;
    doc["seed"] = cfg.seed;
    write_output(doc.dump(), common.out);
  } else {
    write_output(report_text(report, label, direction), common.out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"always-valid release wrapper for generate-verify score streams"};
  app.require_subcommand(1);

  // build-pool
  auto* build = app.add_subcommand(
      "build-pool", "construct a hard-negative reference pool from adjudicated candidates");
  std::string candidates_path;
  double q = 0.55;
  std::vector<std::string> meta_entries;
  std::string build_out;
  build->add_option("--candidates", candidates_path,
                    "candidate bank (JSONL: task_id, score, adjudication)")
      ->required();
  build->add_option("--q", q, "retained upper fraction of incorrect scores");
  build->add_option("--meta", meta_entries, "provenance entries, key=value");
  build->add_option("--out", build_out, "pool file to write (stdout if omitted)");

  // diagnose-pool
  auto* diagnose = app.add_subcommand(
      "diagnose-pool", "check calibration conservativeness on held-out incorrect candidates");
  std::string diag_pool, diag_heldout, diag_format = "table", diag_out;
  std::vector<double> grid{0.05, 0.10, 0.20};
  double slack = 0.0;
  diagnose->add_option("--pool", diag_pool, "pool file")->required();
  diagnose->add_option("--heldout", diag_heldout, "held-out candidate bank (JSONL)")
      ->required();
  diagnose->add_option("--grid", grid, "levels to check")->delimiter(',');
  diagnose->add_option("--slack", slack, "allowed excess over the diagonal");
  diagnose->add_option("--format", diag_format, "table | machine");
  diagnose->add_option("--out", diag_out, "output file (stdout if omitted)");

  // run
  auto* run = app.add_subcommand("run", "run one stopping rule on a single trajectory");
  std::string run_traj, run_pool, run_task, run_method = "ours";
  double run_entropy_threshold = 0.0;
  int run_n_test = 30;
  CommonOpts run_common;
  run->add_option("--trajectories", run_traj, "trajectory file (JSONL)")->required();
  run->add_option("--pool", run_pool, "pool file (calibrated methods)");
  run->add_option("--task", run_task, "task id to run (required with several tasks)");
  run->add_option("--method", run_method, "ours | first_p | entropy | stability");
  auto* run_h = run->add_option("--entropy-threshold", run_entropy_threshold,
                                "release threshold for the entropy rule");
  run->add_option("--n-test", run_n_test, "visible test count for the stability rule");
  run->add_option("--alpha", run_common.alpha, "safety level");
  run->add_option("--eta", run_common.eta, "betting exponent");
  run->add_option("--trunc", run_common.trunc, "betting truncation level");
  run->add_option("--t-max", run_common.t_max, "maximum horizon");
  run->add_option("--format", run_common.format, "table | machine");
  run->add_option("--out", run_common.out, "output file (stdout if omitted)");

  // evaluate
  auto* evaluate = app.add_subcommand(
      "evaluate", "evaluate every configured rule on a labeled cohort");
  std::string eval_traj, eval_pool;
  std::vector<double> eval_alphas;
  double eval_entropy_threshold = 0.0;
  int eval_n_test = 30;
  CommonOpts eval_common;
  evaluate->add_option("--trajectories", eval_traj, "trajectory file (JSONL)")->required();
  evaluate->add_option("--pool", eval_pool, "pool file")->required();
  evaluate->add_option("--alpha", eval_alphas, "safety levels")->delimiter(',');
  auto* eval_h = evaluate->add_option("--entropy-threshold", eval_entropy_threshold,
                                      "include the entropy rule at this threshold");
  evaluate->add_option("--n-test", eval_n_test, "visible test count for the stability rule");
  evaluate->add_option("--eta", eval_common.eta, "betting exponent");
  evaluate->add_option("--trunc", eval_common.trunc, "betting truncation level");
  evaluate->add_option("--t-max", eval_common.t_max, "maximum horizon");
  evaluate->add_option("--format", eval_common.format, "table | machine");
  evaluate->add_option("--out", eval_common.out, "output file (stdout if omitted)");

  // gain
  auto* gain = app.add_subcommand(
      "gain", "per-task and stepwise gain decompositions for labeled trajectories");
  std::string gain_traj, gain_pool;
  CommonOpts gain_common;
  gain->add_option("--trajectories", gain_traj, "trajectory file (JSONL)")->required();
  gain->add_option("--pool", gain_pool, "pool file")->required();
  gain->add_option("--alpha", gain_common.alpha, "safety level");
  gain->add_option("--eta", gain_common.eta, "betting exponent");
  gain->add_option("--trunc", gain_common.trunc, "betting truncation level");
  gain->add_option("--t-max", gain_common.t_max, "maximum horizon");
  gain->add_option("--format", gain_common.format, "table | machine");
  gain->add_option("--out", gain_common.out, "output file (stdout if omitted)");

  // simulate
  auto* simulate = app.add_subcommand(
      "simulate", "Monte Carlo verification of the false-release and stopping bounds");
  std::string sim_kind, sim_pool_path, sim_pool_law = "uniform",
                        sim_stream_law = "empirical";
  NullSimConfig sim_cfg;
  double hit_rate = 0.05;
  CommonOpts sim_common;
  simulate->add_option("--kind", sim_kind, "null | naive")->required();
  simulate->add_option("--reps", sim_cfg.reps, "replications");
  simulate->add_option("--seed", sim_cfg.seed, "root seed");
  simulate->add_option("--n-pool", sim_cfg.n_pool, "simulated pool size");
  simulate->add_option("--pool-law", sim_pool_law, "uniform | beta:a,b | point:x");
  simulate->add_option("--stream-law", sim_stream_law,
                       "uniform | beta:a,b | empirical | point:x");
  simulate->add_option("--drift-eps", sim_cfg.drift_eps,
                       "total-variation contamination weight");
  simulate->add_option("--hit-rate", hit_rate, "per-step crossing chance (naive)");
  simulate->add_option("--alpha", sim_common.alpha, "safety level");
  simulate->add_option("--eta", sim_common.eta, "betting exponent");
  simulate->add_option("--trunc", sim_common.trunc, "betting truncation level");
  simulate->add_option("--t-max", sim_common.t_max, "horizon");
  simulate->add_option("--pool", sim_pool_path, "use this pool file instead of sampling one");
  simulate->add_option("--format", sim_common.format, "table | machine");
  simulate->add_option("--out", sim_common.out, "output file (stdout if omitted)");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "closed-form theory bound calculators");
  std::string bound_kind;
  double b_q = 0.0, b_pi0 = 0.5, b_beta = 0.5, b_c = 0.05;
  double b_b = 0.0, b_a = 0.0, b_zmax = 1.0, b_eps = 0.0;
  std::vector<double> b_cseq;
  CommonOpts bound_common;
  bounds->add_option("--bound", bound_kind, "rout | naive | power | drift")->required();
  bounds->add_option("--q", b_q, "feasible-side failure rate (rout)");
  bounds->add_option("--pi0", b_pi0, "infeasible prior mass (rout)");
  bounds->add_option("--beta", b_beta, "feasible-side release probability (rout)");
  bounds->add_option("--c", b_c, "constant per-step crossing chance (naive)");
  bounds->add_option("--c-seq", b_cseq, "per-step crossing chances (naive)")
      ->delimiter(',');
  bounds->add_option("--b", b_b, "supplied cumulative gain (power)");
  bounds->add_option("--a", b_a, "required cumulative gain (power)");
  bounds->add_option("--z-max", b_zmax, "largest one-step gain (power)");
  bounds->add_option("--eps", b_eps, "per-step calibration drift (drift)");
  bounds->add_option("--alpha", bound_common.alpha, "safety level");
  bounds->add_option("--trunc", bound_common.trunc, "betting truncation level (drift)");
  bounds->add_option("--t-max", bound_common.t_max, "horizon");
  bounds->add_option("--format", bound_common.format, "table | machine");
  bounds->add_option("--out", bound_common.out, "output file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*build) return cmd_build_pool(candidates_path, q, meta_entries, build_out);
    if (*diagnose)
      return cmd_diagnose_pool(diag_pool, diag_heldout, grid, slack, diag_format,
                               diag_out);
    if (*run)
      return cmd_run(run_traj, run_pool, run_task, run_method,
                     run_entropy_threshold, run_h->count() > 0, run_n_test,
                     run_common);
    if (*evaluate)
      return cmd_evaluate(eval_traj, eval_pool, eval_alphas, eval_entropy_threshold,
                          eval_h->count() > 0, eval_n_test, eval_common);
    if (*gain) return cmd_gain(gain_traj, gain_pool, gain_common);
    if (*simulate)
      return cmd_simulate(sim_kind, sim_cfg, hit_rate, sim_pool_path, sim_pool_law,
                          sim_stream_law, sim_common);
    if (*bounds) {
      double value = 0.0;
      if (bound_kind == "rout") {
        value = rout_upper_bound(b_q, b_pi0, bound_common.alpha, b_beta);
      } else if (bound_kind == "naive") {
        std::vector<double> c_seq = b_cseq;
        if (c_seq.empty()) c_seq.assign(bound_common.t_max, b_c);
        value = naive_stopping_lower_bound(c_seq, bound_common.t_max);
      } else if (bound_kind == "power") {
        value = power_lower_bound(b_b, b_a, b_zmax, bound_common.t_max);
      } else if (bound_kind == "drift") {
        value = drift_upper_bound(bound_common.alpha, bound_common.trunc, b_eps,
                                  bound_common.t_max);
      } else {
        throw std::invalid_argument("unknown bound '" + bound_kind + "'");
      }
      if (parse_format(bound_common.format) == ReportFormat::machine) {
        json doc;
        doc["bound"] = bound_kind;
        doc["value"] = value;
        write_output(doc.dump(), bound_common.out);
      } else {
        write_output(bound_kind + " bound = " + fmt6(value), bound_common.out);
      }
      return 0;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
