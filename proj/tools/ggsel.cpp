// Command-line front end: fit and compare the Gompertz and gamma-Gompertz
// models on left-truncated lifespan data, run the Monte Carlo harness, and
// emit machine-readable reports and tables.

#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "ggsel/errors.hpp"
#include "ggsel/io.hpp"
#include "ggsel/version.hpp"

namespace {

using ggsel::io::AnalysisConfig;
using ggsel::io::json;

struct CommonArgs {
  std::string data;
  double origin_age = 60.0;
  double truncation = 90.0;
  std::vector<std::string> focus;
  std::vector<std::string> criteria;
  std::vector<double> sigma2_starts;
  std::uint64_t seed = 0;
  std::string info_at = "full";
  std::string out = ".";
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_criteria) {
  cmd->add_option("--data", a.data, "input CSV (header: id,age_at_death)")->required();
  cmd->add_option("--origin-age", a.origin_age, "calendar age mapped to y = 0");
  cmd->add_option("--truncation", a.truncation, "left-truncation age");
  cmd->add_option("--focus", a.focus,
                  "focus parameter, repeatable: sigma2|curvature@Y|loghaz@Y|survival@Y");
  if (with_criteria) {
    cmd->add_option("--criteria", a.criteria,
                    "subset of fic_mae,pretest,aic_star,lrt")
        ->delimiter(',');
  }
  cmd->add_option("--sigma2-starts", a.sigma2_starts,
                  "starting values for the frailty variance")
      ->delimiter(',');
  cmd->add_option("--seed", a.seed, "seed echoed into the report");
  cmd->add_option("--info-at", a.info_at, "evaluate J at: full|null")
      ->check(CLI::IsMember({"full", "null"}));
  cmd->add_option("--out", a.out, "output directory");
}

AnalysisConfig to_config(const CommonArgs& a, bool with_criteria) {
  AnalysisConfig cfg;
  cfg.ages.origin_age = a.origin_age;
  cfg.ages.truncation_age = a.truncation;
  for (const auto& f : a.focus) {
    cfg.foci.push_back(ggsel::parse_focus(f, a.origin_age));
  }
  if (with_criteria && !a.criteria.empty()) cfg.criteria = a.criteria;
  if (!with_criteria) cfg.criteria.clear();  // `fit` reports fits only
  if (!a.sigma2_starts.empty()) cfg.fit.sigma2_starts = a.sigma2_starts;
  cfg.seed = a.seed;
  cfg.info_at_null = a.info_at == "null";
  return cfg;
}

std::string out_path(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / name).string();
}

void print_report_summary(const ggsel::io::ReportDocument& doc) {
  const auto& fn = doc.fit_null_summary;
  const auto& ff = doc.fit_full_summary;
  std::printf("gompertz      a=%.6g b=%.6g            loglik=%.6f\n", fn.a, fn.b,
              fn.loglik);
  std::printf("gamma-gompertz a=%.6g b=%.6g sigma2=%.6g loglik=%.6f%s\n", ff.a, ff.b,
              ff.sigma2, ff.loglik, ff.boundary_hit ? " (boundary)" : "");
  for (const auto& c : doc.criteria) {
    std::printf("%-10s %-16s null=%.6g full=%.6g -> %s\n", c.criterion.c_str(),
                c.focus ? c.focus->c_str() : "-", c.score_null, c.score_full,
                c.chosen == ggsel::ModelChoice::Full ? "gamma-gompertz" : "gompertz");
  }
  if (doc.lrt_result) {
    std::printf("lrt        T=%.6g p=%.6g\n", doc.lrt_result->statistic,
                doc.lrt_result->p_value);
  }
  for (const auto& w : doc.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
}

int run_analyze(const CommonArgs& args, bool with_criteria) {
  const AnalysisConfig cfg = to_config(args, with_criteria);
  const ggsel::io::IngestResult in = ggsel::io::ingest(args.data, cfg);
  if (!in.rejected_rows.empty()) {
    std::fprintf(stderr, "note: %zu row(s) at or below the truncation age were excluded\n",
                 in.rejected_rows.size());
  }
  const ggsel::io::ReportDocument doc = ggsel::io::analyze(in, cfg);
  const std::string path = out_path(args.out, "report.json");
  ggsel::io::write_file_atomic(path, doc.to_json().dump(2) + "\n");
  print_report_summary(doc);
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int run_rates(const CommonArgs& args) {
  AnalysisConfig cfg = to_config(args, false);
  const ggsel::io::IngestResult in = ggsel::io::ingest(args.data, cfg);
  const ggsel::FitResult fn = ggsel::fit_null(in.sample, cfg.fit);
  const ggsel::FitResult ff = ggsel::fit_full(in.sample, cfg.fit, &fn);
  const ggsel::io::RateTable table = ggsel::io::rate_table(in.sample, fn, ff, cfg.ages);
  const std::string path = out_path(args.out, "rates.csv");
  ggsel::io::write_file_atomic(path, table.to_csv());
  std::printf("wrote %s (%zu rows)\n", path.c_str(), table.rows.size());
  return 0;
}

struct SimulateArgs {
  std::string scenario;
  std::string config;
  long long target_n = 10000;
  long long reps = 200;
  double window = 90.0;
  std::uint64_t seed = 0;
  bool paper_scale = false;
  std::vector<std::string> focus;
  std::vector<std::string> criteria = {"fic_mae", "pretest", "aic_star", "lrt"};
  std::string out = ".";
};

int run_simulate(const SimulateArgs& args, const CLI::App* cmd) {
  ggsel::sim::Scenario sc;
  if (!args.config.empty()) {
    sc = ggsel::io::load_scenario_config(args.config);
  } else if (!args.scenario.empty()) {
    sc = ggsel::sim::preset_scenario(args.scenario);
  } else {
    throw ggsel::DataError("simulate: provide --scenario or --config");
  }
  if (cmd->count("--target-n")) sc.target_n = args.target_n;
  if (cmd->count("--reps")) sc.replications = args.reps;
  if (cmd->count("--window")) sc.window_age = args.window;
  if (cmd->count("--seed")) sc.master_seed = args.seed;
  if (args.paper_scale) {
    if (!cmd->count("--reps")) sc.replications = 1000;
    std::fprintf(stderr,
                 "warning: --paper-scale runs %lld replications at target %lld; "
                 "expect a long runtime\n",
                 sc.replications, sc.target_n);
  }

  std::vector<ggsel::FocusSpec> foci;
  for (const auto& f : args.focus) {
    foci.push_back(ggsel::parse_focus(f, sc.origin_age));
  }
  if (foci.empty()) {
    foci = {{ggsel::FocusKind::Sigma2, 0.0},
            {ggsel::FocusKind::LogHazardCurvature, 100.0 - sc.origin_age}};
  }

  const ggsel::sim::ScenarioMetrics m = ggsel::sim::run_scenario(sc, args.criteria, foci);
  const std::string path = out_path(args.out, "metrics.json");
  ggsel::io::write_file_atomic(path, ggsel::io::metrics_to_json(m).dump(2) + "\n");

  std::printf("scenario %s target_n=%lld window=%g reps=%lld (failed %lld)\n",
              sc.name.c_str(), sc.target_n, sc.window_age, sc.replications, m.n_failed);
  for (const auto& key : m.criterion_keys) {
    const auto& cs = m.criteria.at(key);
    std::printf("  %-24s proportion_full=%.4f (se %.4f)\n", key.c_str(),
                cs.proportion_full, cs.mc_se);
  }
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

struct OracleArgs {
  long long draws = 1000000;
  int geoms = 50;
  std::uint64_t seed = 20190514;
  std::string out = ".";
};

int run_oracle(const OracleArgs& args) {
  const auto geometries = ggsel::sim::random_geometries(args.geoms, args.seed);
  const ggsel::sim::OracleStudy study =
      ggsel::sim::mae_oracle_study(geometries, args.draws, args.seed + 1);
  ggsel::io::write_file_atomic(out_path(args.out, "oracle.csv"),
                               ggsel::io::oracle_to_csv(study));
  ggsel::io::write_file_atomic(out_path(args.out, "oracle.json"),
                               ggsel::io::oracle_to_json(study).dump(2) + "\n");
  std::printf("oracle: %d geometries x %lld draws, max relative gap %.5f\n",
              args.geoms, args.draws, study.max_rel_gap);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gompertz vs gamma-Gompertz model selection for left-truncated lifespans"};
  app.set_version_flag("--version", std::string("ggsel ") + ggsel::kVersion);
  app.require_subcommand(1);

  CommonArgs fit_args, select_args, rates_args;
  auto* cmd_fit = app.add_subcommand("fit", "fit both models, write report.json");
  add_common(cmd_fit, fit_args, false);
  auto* cmd_select =
      app.add_subcommand("select", "fit and run model selection, write report.json");
  add_common(cmd_select, select_args, true);
  auto* cmd_rates =
      app.add_subcommand("rates", "empirical and fitted death rates, write rates.csv");
  add_common(cmd_rates, rates_args, false);

  SimulateArgs sim_args;
  auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo study, write metrics.json");
  cmd_sim->add_option("--scenario", sim_args.scenario, "preset scenario")
      ->check(CLI::IsMember({"S1", "S2", "S3"}));
  cmd_sim->add_option("--config", sim_args.config, "scenario config JSON");
  cmd_sim->add_option("--target-n", sim_args.target_n, "target subset size at the window age");
  cmd_sim->add_option("--reps", sim_args.reps, "number of replications");
  cmd_sim->add_option("--window", sim_args.window, "window age")
      ->check(CLI::IsMember({"80", "85", "90"}));
  cmd_sim->add_option("--seed", sim_args.seed, "master seed");
  cmd_sim->add_flag("--paper-scale", sim_args.paper_scale,
                    "full-scale study defaults (1000 replications)");
  cmd_sim->add_option("--focus", sim_args.focus, "focus parameter, repeatable");
  cmd_sim->add_option("--criteria", sim_args.criteria,
                      "subset of fic_mae,pretest,aic_star,lrt")
      ->delimiter(',');
  cmd_sim->add_option("--out", sim_args.out, "output directory");

  OracleArgs oracle_args;
  auto* cmd_oracle = app.add_subcommand(
      "oracle", "Monte Carlo check of the closed-form risk formulas, write oracle.csv");
  cmd_oracle->add_option("--draws", oracle_args.draws, "draws per geometry (>= 1e5)");
  cmd_oracle->add_option("--geoms", oracle_args.geoms, "number of geometries");
  cmd_oracle->add_option("--seed", oracle_args.seed, "seed");
  cmd_oracle->add_option("--out", oracle_args.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (cmd_fit->parsed()) return run_analyze(fit_args, false);
    if (cmd_select->parsed()) return run_analyze(select_args, true);
    if (cmd_rates->parsed()) return run_rates(rates_args);
    if (cmd_sim->parsed()) return run_simulate(sim_args, cmd_sim);
    if (cmd_oracle->parsed()) return run_oracle(oracle_args);
  } catch (const ggsel::NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const ggsel::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
