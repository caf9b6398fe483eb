#include "ggsel/simharness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ggsel/errors.hpp"
#include "ggsel/rng.hpp"

namespace ggsel::sim {

void Scenario::validate() const {
  params.validate();
  if (!(target_n > 0)) throw ArgumentError("Scenario: target_n must be positive");
  if (!(replications > 0)) throw ArgumentError("Scenario: replications must be positive");
  if (!(window_age >= origin_age)) {
    throw ArgumentError("Scenario: window_age must be >= origin_age");
  }
}

Scenario preset_scenario(const std::string& name) {
  Scenario sc;
  sc.name = name;
  if (name == "S1") {
    sc.params = {0.013, 0.092, 0.0625};
  } else if (name == "S2") {
    sc.params = {0.013, 0.092, 0.03};
  } else if (name == "S3") {
    sc.params = {0.0198, 0.0726, 0.0};
  } else {
    throw ArgumentError("unknown scenario preset '" + name + "'");
  }
  return sc;
}

long long calibrate_cohort(const Scenario& sc) {
  sc.validate();
  const double s = survival(sc.params, sc.window_offset());
  return std::llround(static_cast<double>(sc.target_n) / s);
}

Sample generate_replication(const Scenario& sc, long long rep_id) {
  sc.validate();
  if (rep_id < 0) throw ArgumentError("generate_replication: rep_id must be >= 0");
  const long long n0 = calibrate_cohort(sc);
  const double w = sc.window_offset();

  auto rng = math::make_stream(sc.master_seed, static_cast<std::uint64_t>(rep_id));
  Sample out;
  out.truncation = w;
  out.lifespans.reserve(static_cast<std::size_t>(sc.target_n + 4 * std::lround(std::sqrt(
                            static_cast<double>(sc.target_n)))));
  for (long long i = 0; i < n0; ++i) {
    const double u = math::uniform01(rng);
    const double y = detail::quantile_from_survival(sc.params, u);
    if (y > w) out.lifespans.push_back(y);
  }
  if (out.lifespans.empty()) {
    throw DataError("generate_replication: no lifespan exceeded the window age");
  }
  return out;
}

namespace {

struct FocusOut {
  double fic_null = 0.0;
  double fic_full = 0.0;
  std::map<std::string, double> abs_err_scaled;  // per criterion key
};

struct RepOutcome {
  bool ok = false;
  std::string error;
  double realized_n = 0.0;
  bool boundary_hit = false;
  bool lrt_zero = false;
  std::map<std::string, bool> decision_full;
  std::map<std::string, FocusOut> focus_out;
};

RepOutcome run_replication(const Scenario& sc, long long rep,
                           const std::vector<std::string>& criteria,
                           const std::vector<FocusSpec>& foci,
                           const FitOptions& fit_opt, double lrt_alpha) {
  RepOutcome out;
  const Sample sample = generate_replication(sc, rep);
  out.realized_n = static_cast<double>(sample.n());
  const double sqrt_n = std::sqrt(out.realized_n);

  const FitResult fn = fit_null(sample, fit_opt);
  const FitResult ff = fit_full(sample, fit_opt, &fn);
  const InfoQuantities info = info_quantities(ff, sample.n());
  out.boundary_hit = ff.boundary_hit;

  const bool want_fic = std::count(criteria.begin(), criteria.end(), "fic_mae") > 0;
  const bool want_pre = std::count(criteria.begin(), criteria.end(), "pretest") > 0;
  const bool want_aic = std::count(criteria.begin(), criteria.end(), "aic_star") > 0;
  const bool want_lrt = std::count(criteria.begin(), criteria.end(), "lrt") > 0;

  if (want_pre) {
    out.decision_full["pretest"] = pretest(info).chosen == ModelChoice::Full;
  }
  if (want_aic) {
    out.decision_full["aic_star"] = aic_star(ff, fn, info).chosen == ModelChoice::Full;
  }
  // The T = 0 share is tracked even when the LRT is not a selection criterion.
  const LrtResult lr = lrt(ff, fn);
  out.lrt_zero = lr.statistic == 0.0;
  if (want_lrt) out.decision_full["lrt"] = lr.p_value < lrt_alpha;

  for (const FocusSpec& f : foci) {
    const std::string label = focus_label(f, sc.origin_age);
    const double mu_true = focus_value(f, sc.params);
    const double mu_hat_null = focus_value(f, fn.params);
    const double mu_hat_full = focus_value(f, ff.params);

    FocusOut fo;
    if (want_fic) {
      const FocusGeometry geom = focus_geometry(f, fn, info);
      const SelectionReport rep_fic = fic_mae(geom, info);
      fo.fic_null = rep_fic.score_null;
      fo.fic_full = rep_fic.score_full;
      out.decision_full["fic_mae:" + label] = rep_fic.chosen == ModelChoice::Full;
    }
    for (const auto& [key, full] : out.decision_full) {
      // A focus-specific key only pairs with its own focus.
      if (key.rfind("fic_mae:", 0) == 0 && key != "fic_mae:" + label) continue;
      const double mu_sel = full ? mu_hat_full : mu_hat_null;
      fo.abs_err_scaled[key] = sqrt_n * std::fabs(mu_sel - mu_true);
    }
    out.focus_out[label] = fo;
  }
  out.ok = true;
  return out;
}

}  // namespace

ScenarioMetrics run_scenario(const Scenario& sc,
                             const std::vector<std::string>& criteria,
                             const std::vector<FocusSpec>& foci,
                             const FitOptions& fit_opt, double lrt_alpha) {
  sc.validate();
  for (const auto& c : criteria) {
    if (c != "fic_mae" && c != "pretest" && c != "aic_star" && c != "lrt") {
      throw ArgumentError("run_scenario: unknown criterion '" + c + "'");
    }
  }

  const long long reps = sc.replications;
  std::vector<RepOutcome> outcomes(static_cast<std::size_t>(reps));

#pragma omp parallel for schedule(dynamic)
  for (long long rep = 0; rep < reps; ++rep) {
    auto& slot = outcomes[static_cast<std::size_t>(rep)];
    try {
      slot = run_replication(sc, rep, criteria, foci, fit_opt, lrt_alpha);
    } catch (const Error& e) {
      slot.ok = false;
      slot.error = e.what();
    }
  }

  ScenarioMetrics m;
  m.scenario = sc;
  for (long long rep = 0; rep < reps; ++rep) {
    if (!outcomes[static_cast<std::size_t>(rep)].ok) {
      m.failed_reps.push_back(rep);
    }
  }
  m.n_failed = static_cast<long long>(m.failed_reps.size());
  m.n_success = reps - m.n_failed;
  if (m.n_failed * 100 > reps) {
    throw NumericalError("run_scenario: " + std::to_string(m.n_failed) + " of " +
                         std::to_string(reps) + " replications failed (> 1%)");
  }
  if (m.n_success == 0) throw NumericalError("run_scenario: no successful replication");
  const double r = static_cast<double>(m.n_success);

  // Criterion keys in deterministic order.
  for (const auto& c : criteria) {
    if (c == "fic_mae") {
      for (const auto& f : foci) {
        m.criterion_keys.push_back("fic_mae:" + focus_label(f, sc.origin_age));
      }
    } else {
      m.criterion_keys.push_back(c);
    }
  }

  for (const auto& key : m.criterion_keys) {
    CriterionStats cs;
    for (const auto& o : outcomes) {
      if (!o.ok) continue;
      auto it = o.decision_full.find(key);
      if (it != o.decision_full.end() && it->second) ++cs.n_full;
    }
    cs.proportion_full = static_cast<double>(cs.n_full) / r;
    cs.mc_se = std::sqrt(cs.proportion_full * (1.0 - cs.proportion_full) / r);
    m.criteria[key] = cs;
  }

  long long boundary = 0, lrt_zero = 0;
  double sum_n = 0.0;
  for (const auto& o : outcomes) {
    if (!o.ok) continue;
    boundary += o.boundary_hit ? 1 : 0;
    lrt_zero += o.lrt_zero ? 1 : 0;
    sum_n += o.realized_n;
  }
  m.boundary_hit_fraction = static_cast<double>(boundary) / r;
  m.lrt_zero_fraction = static_cast<double>(lrt_zero) / r;
  m.mean_realized_n = sum_n / r;

  for (const auto& f : foci) {
    const std::string label = focus_label(f, sc.origin_age);
    FocusStats fs;
    fs.mu_true = focus_value(f, sc.params);
    for (const auto& o : outcomes) {
      if (!o.ok) continue;
      const FocusOut& fo = o.focus_out.at(label);
      fs.mean_fic_null += fo.fic_null / r;
      fs.mean_fic_full += fo.fic_full / r;
    }
    for (const auto& key : m.criterion_keys) {
      if (key.rfind("fic_mae:", 0) == 0 && key != "fic_mae:" + label) continue;
      FocusCriterionStats fcs;
      for (const auto& o : outcomes) {
        if (!o.ok) continue;
        const auto& errs = o.focus_out.at(label).abs_err_scaled;
        auto it = errs.find(key);
        if (it != errs.end()) fcs.per_rep_abs_err.push_back(it->second);
      }
      if (fcs.per_rep_abs_err.empty()) continue;
      const double c = static_cast<double>(fcs.per_rep_abs_err.size());
      double sum = 0.0, sum2 = 0.0;
      for (double e : fcs.per_rep_abs_err) {
        sum += e;
        sum2 += e * e;
      }
      fcs.mae_selected = sum / c;
      const double var = std::max(0.0, sum2 / c - fcs.mae_selected * fcs.mae_selected);
      fcs.mae_se = std::sqrt(var / c);
      fs.per_criterion[key] = fcs;
    }
    m.foci[label] = fs;
  }
  return m;
}

OracleStudy mae_oracle_study(const std::vector<std::array<double, 4>>& geometries,
                             long long draws, std::uint64_t seed) {
  if (draws < 100000) {
    throw ArgumentError("mae_oracle_study: needs at least 1e5 draws");
  }
  OracleStudy study;
  study.draws = draws;
  study.rows.resize(geometries.size());

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t gi = 0; gi < static_cast<std::ptrdiff_t>(geometries.size()); ++gi) {
    const auto [tau0, omega, delta, kappa] = geometries[static_cast<std::size_t>(gi)];
    auto rng = math::make_stream(seed, static_cast<std::uint64_t>(gi));

    double s_abs_n = 0, s_sq_n = 0, s_abs_f = 0, s_sq_f = 0;
    for (long long i = 0; i < draws; ++i) {
      const double lambda0 = tau0 * math::normal01(rng);
      const double d = delta + kappa * math::normal01(rng);
      const double l_null = lambda0 + omega * delta;
      const double l_full = (d > 0.0) ? lambda0 + omega * (delta - d) : l_null;
      s_abs_n += std::fabs(l_null);
      s_sq_n += l_null * l_null;
      s_abs_f += std::fabs(l_full);
      s_sq_f += l_full * l_full;
    }
    const double inv = 1.0 / static_cast<double>(draws);

    OracleRow row;
    row.tau0 = tau0;
    row.omega = omega;
    row.delta = delta;
    row.kappa = kappa;
    row.mae_null_cf = mae_limit_null(tau0, omega, delta);
    row.mae_full_cf = mae_limit_full(tau0, omega, delta, kappa);
    row.mse_null_cf = mse_limit_null(tau0, omega, delta);
    row.mse_full_cf = mse_limit_full(tau0, omega, delta, kappa);
    row.mae_null_mc = s_abs_n * inv;
    row.mae_full_mc = s_abs_f * inv;
    row.mse_null_mc = s_sq_n * inv;
    row.mse_full_mc = s_sq_f * inv;

    auto gap = [](double cf, double mc) {
      if (std::fabs(cf) < 1e-300 && std::fabs(mc) < 1e-300) return 0.0;
      return std::fabs(cf - mc) / std::max(std::fabs(cf), 1e-12);
    };
    row.max_rel_gap = std::max({gap(row.mae_null_cf, row.mae_null_mc),
                                gap(row.mae_full_cf, row.mae_full_mc),
                                gap(row.mse_null_cf, row.mse_null_mc),
                                gap(row.mse_full_cf, row.mse_full_mc)});
    study.rows[static_cast<std::size_t>(gi)] = row;
  }
  for (const auto& row : study.rows) {
    study.max_rel_gap = std::max(study.max_rel_gap, row.max_rel_gap);
  }
  return study;
}

std::vector<std::array<double, 4>> random_geometries(int count, std::uint64_t seed) {
  if (count < 1) throw ArgumentError("random_geometries: count must be positive");
  std::vector<std::array<double, 4>> out;
  out.reserve(static_cast<std::size_t>(count));
  auto rng = math::make_stream(seed, 0xfeedULL);
  auto unif = [&](double lo, double hi) {
    return lo + (hi - lo) * math::uniform01(rng);
  };
  for (int i = 0; i < count; ++i) {
    std::array<double, 4> g;
    if (i == 0) {
      g = {0.0, -1.0, 0.0, 1.0};  // sigma2-focus ray at delta = 0
    } else if (i == 1) {
      g = {0.0, unif(0.3, 2.0), unif(0.5, 2.5), unif(0.3, 2.0)};
    } else {
      const double sign = math::uniform01(rng) < 0.5 ? -1.0 : 1.0;
      g = {unif(0.2, 2.0), sign * unif(0.3, 2.0), unif(0.0, 3.0), unif(0.3, 2.0)};
    }
    out.push_back(g);
  }
  return out;
}

}  // namespace ggsel::sim
