#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ggsel/selection.hpp"

namespace ggsel::sim {

// One Monte Carlo setting: the generating model, the age window used for
// selection, and the target subset size at the window age.
struct Scenario {
  std::string name = "custom";  // S1 | S2 | S3 | custom
  ModelParams params;
  long long target_n = 10000;   // expected count at the window age
  double window_age = 90.0;
  double origin_age = 60.0;
  long long replications = 200;
  std::uint64_t master_seed = 0;

  void validate() const;
  double window_offset() const { return window_age - origin_age; }
};

// Paper scenarios; target_n / replications / seed keep their defaults.
Scenario preset_scenario(const std::string& name);

// Initial cohort size at the origin so that on average target_n individuals
// survive past the window age.
long long calibrate_cohort(const Scenario& sc);

// Draw a full cohort, keep survivors past the window, return them as a
// left-truncated sample. Deterministic in (master_seed, rep_id).
Sample generate_replication(const Scenario& sc, long long rep_id);

struct CriterionStats {
  double proportion_full = 0.0;
  double mc_se = 0.0;
  long long n_full = 0;
};

struct FocusCriterionStats {
  double mae_selected = 0.0;  // mean over reps of sqrt(n) |mu_hat_sel - mu_true|
  double mae_se = 0.0;
  std::vector<double> per_rep_abs_err;  // in replication order; not serialized
};

struct FocusStats {
  double mu_true = 0.0;
  double mean_fic_null = 0.0;
  double mean_fic_full = 0.0;
  std::map<std::string, FocusCriterionStats> per_criterion;
};

struct ScenarioMetrics {
  Scenario scenario;
  std::vector<std::string> criterion_keys;
  std::map<std::string, CriterionStats> criteria;
  std::map<std::string, FocusStats> foci;  // keyed by focus label
  long long n_success = 0;
  long long n_failed = 0;
  std::vector<long long> failed_reps;
  double mean_realized_n = 0.0;
  double boundary_hit_fraction = 0.0;
  double lrt_zero_fraction = 0.0;
};

// Fit both models on every replication, apply all criteria and foci, and
// aggregate. Replications run in parallel; results are identical to the
// sequential order for any thread count. Criteria names: fic_mae, pretest,
// aic_star, lrt (fic_mae expands to one key per focus). Failed replications
// are excluded with a count; more than 1% failures aborts the run.
ScenarioMetrics run_scenario(const Scenario& sc,
                             const std::vector<std::string>& criteria,
                             const std::vector<FocusSpec>& foci,
                             const FitOptions& fit_opt = {},
                             double lrt_alpha = 0.05);

// Monte Carlo check of the closed-form limiting risks: simulates the limit
// distributions (Lambda_0, D) with their case split and compares the
// empirical mean |Lambda| and Lambda^2 against the closed forms.
struct OracleRow {
  double tau0 = 0, omega = 0, delta = 0, kappa = 0;
  double mae_null_cf = 0, mae_full_cf = 0, mse_null_cf = 0, mse_full_cf = 0;
  double mae_null_mc = 0, mae_full_mc = 0, mse_null_mc = 0, mse_full_mc = 0;
  double max_rel_gap = 0;
};

struct OracleStudy {
  std::vector<OracleRow> rows;
  long long draws = 0;
  double max_rel_gap = 0;
};

// geometries: rows of (tau0, omega, delta, kappa). draws >= 1e5 required.
OracleStudy mae_oracle_study(const std::vector<std::array<double, 4>>& geometries,
                             long long draws, std::uint64_t seed);

// Random geometry grid for the oracle; the first two rows lie on the
// degenerate tau0 = 0 ray that the recommended foci occupy.
std::vector<std::array<double, 4>> random_geometries(int count, std::uint64_t seed);

}  // namespace ggsel::sim
