// Acceptance suite: one pass/fail line per criterion. Exit code is the
// number of failed criteria. Expect a total runtime in the tens of minutes
// on a couple of cores; the heavy Monte Carlo work parallelizes.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <omp.h>

#include "ggsel/inference.hpp"
#include "ggsel/io.hpp"
#include "ggsel/loglik_kernel.hpp"
#include "ggsel/model.hpp"
#include "ggsel/rng.hpp"
#include "ggsel/selection.hpp"
#include "ggsel/simharness.hpp"
#include "ggsel/special.hpp"
#include "../tests/oracles.hpp"

using namespace ggsel;
using namespace ggsel::sim;

namespace {

int g_failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] %-28s %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

// ---------------------------------------------------------------------------

void threshold_recovery() {
  const double mse = solve_mse_tolerance_radius();
  const double mae = solve_mae_sigma2_tolerance_radius();
  const bool pass = std::fabs(mse - 0.8399) <= 1e-4 && std::fabs(mae - 0.6399) <= 1e-4;
  report("threshold-recovery", pass,
         fmt("mse radius %.6f (0.8399 +/- 1e-4), mae radius %.6f (0.6399 +/- 1e-4)", mse, mae));
}

void risk_formula_oracle() {
  const auto geoms = random_geometries(50, 20190514);
  const auto study = mae_oracle_study(geoms, 1000000, 20190515);
  report("risk-formula-oracle", study.max_rel_gap < 0.005,
         fmt("max relative gap %.5f over %zu geometries x 1e6 draws (< 0.005)",
             study.max_rel_gap, study.rows.size()));
}

void derivative_correctness() {
  auto rng = math::make_stream(7, 0);
  const ModelParams truth{0.013, 0.092, 0.0625};
  auto sample_rng = math::make_stream(7, 1);
  const Sample s{sample_lifespans(truth, 80, sample_rng, 25.0), 25.0};

  // sigma2 grid straddles the Taylor seam at 1e-5 from both sides
  const double sgrid[] = {2e-6, 5e-6, 8e-6, 1.3e-5, 2e-5, 1e-4, 1e-3, 0.01, 0.0625, 0.2};
  double worst_g = 0.0, worst_h = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const double a = 0.004 + 0.03 * math::uniform01(rng);
    const double b = 0.05 + 0.08 * math::uniform01(rng);
    const double s2 = sgrid[rep % 10];
    const ModelParams p{a, b, s2};
    const LoglikDerivs d = loglik_derivs(p, s, 2);

    const double hg[3] = {1e-6 * a, 1e-6 * b, oracles::grad_step_sigma2(s2)};
    for (int i = 0; i < 3; ++i) {
      ModelParams pp = p, pm = p;
      (i == 0 ? pp.a : i == 1 ? pp.b : pp.sigma2) += hg[i];
      (i == 0 ? pm.a : i == 1 ? pm.b : pm.sigma2) -= hg[i];
      const double fd = (loglik(pp, s) - loglik(pm, s)) / (2.0 * hg[i]);
      worst_g = std::max(worst_g,
                         std::fabs(fd - d.grad[i]) / std::max(1.0, std::fabs(d.grad[i])));
    }

    const double hh[3] = {1e-4 * a, 1e-4 * b, oracles::hess_step_sigma2(s2)};
    auto fd_grad = [&](int i, double h, int j) {
      ModelParams pp = p, pm = p;
      (i == 0 ? pp.a : i == 1 ? pp.b : pp.sigma2) += h;
      (i == 0 ? pm.a : i == 1 ? pm.b : pm.sigma2) -= h;
      return (loglik_derivs(pp, s, 1).grad[j] - loglik_derivs(pm, s, 1).grad[j]) /
             (2.0 * h);
    };
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double fdh = (4.0 * fd_grad(i, hh[i] / 2, j) - fd_grad(i, hh[i], j)) / 3.0;
        worst_h = std::max(worst_h, std::fabs(fdh - d.hess[i * 3 + j]) /
                                        std::max(1.0, std::fabs(d.hess[i * 3 + j])));
      }
    }
  }
  report("derivative-correctness", worst_g < 1e-6 && worst_h < 1e-4,
         fmt("gradient rel err %.2e (< 1e-6), Hessian rel err %.2e (< 1e-4), "
             "100 configurations straddling sigma2 = 1e-5",
             worst_g, worst_h));
}

void mixture_null_law() {
  // Plain S3 samples of size 2000 (window at the origin age: no truncation).
  Scenario sc = preset_scenario("S3");
  sc.target_n = 2000;
  sc.replications = 1000;
  sc.master_seed = 424242;
  sc.window_age = sc.origin_age;
  const auto m = run_scenario(sc, {"lrt"}, {{FocusKind::Sigma2, 0.0}});
  const double zero = m.lrt_zero_fraction;
  const double rej = m.criteria.at("lrt").proportion_full;
  const bool pass = std::fabs(zero - 0.50) <= 0.05 && std::fabs(rej - 0.05) <= 0.016;
  report("mixture-null-law", pass,
         fmt("T=0 fraction %.3f (0.50 +/- 0.05), 5%% rejections %.3f (0.05 +/- 0.016), "
             "boundary fraction %.3f",
             zero, rej, m.boundary_hit_fraction));
}

ScenarioMetrics scaled_run(const char* name, long long target, long long reps,
                           std::uint64_t seed, double window = 90.0) {
  Scenario sc = preset_scenario(name);
  sc.target_n = target;
  sc.replications = reps;
  sc.master_seed = seed;
  sc.window_age = window;
  const std::vector<FocusSpec> foci = {{FocusKind::Sigma2, 0.0},
                                       {FocusKind::LogHazardCurvature, 40.0}};
  return run_scenario(sc, {"fic_mae", "pretest", "aic_star", "lrt"}, foci);
}

void scaled_simulation_study() {
  const auto m = scaled_run("S1", 10000, 200, 42);
  const auto& fic = m.criteria.at("fic_mae:curvature@100");
  const auto& pre = m.criteria.at("pretest");
  const auto& aic = m.criteria.at("aic_star");
  const double ratio = fic.proportion_full / aic.proportion_full;
  const double se_fp = std::sqrt(fic.mc_se * fic.mc_se + pre.mc_se * pre.mc_se);
  const double se_pa = std::sqrt(pre.mc_se * pre.mc_se + aic.mc_se * aic.mc_se);
  const bool ordered = fic.proportion_full >= pre.proportion_full - se_fp &&
                       pre.proportion_full >= aic.proportion_full - se_pa;
  const bool pass = ratio >= 1.4 && ratio <= 2.3 && ordered;
  report("scaled-simulation-study", pass,
         fmt("S1/10k/200: FIC %.3f, pretest %.3f, AIC* %.3f; FIC/AIC* ratio %.3f "
             "(in [1.4, 2.3]); ordering within 1 MC SE: %s",
             fic.proportion_full, pre.proportion_full, aic.proportion_full, ratio,
             ordered ? "yes" : "no"));
}

void large_n_consistency() {
  const auto m = scaled_run("S1", 105000, 50, 43);
  const double p = m.criteria.at("fic_mae:curvature@100").proportion_full;
  report("large-n-consistency", p >= 0.95,
         fmt("S1/105k/50: FIC_MAE proportion_full %.3f (>= 0.95)", p));
}

void null_over_selection() {
  const auto m = scaled_run("S3", 20000, 200, 44);
  const double p = m.criteria.at("fic_mae:curvature@100").proportion_full;
  report("null-over-selection", std::fabs(p - 0.25) <= 0.08,
         fmt("S3/20k/200: FIC_MAE proportion_full %.3f (0.25 +/- 0.08)", p));
}

void selected_estimator_mae() {
  const auto m = scaled_run("S1", 20000, 200, 45);
  const auto& per = m.foci.at("curvature@100").per_criterion;
  const auto& fic = per.at("fic_mae:curvature@100");
  auto paired_gap = [&](const FocusCriterionStats& other, double& gap, double& se) {
    const std::size_t n = fic.per_rep_abs_err.size();
    double mean = 0.0, var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mean += (fic.per_rep_abs_err[i] - other.per_rep_abs_err[i]) / double(n);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double d = fic.per_rep_abs_err[i] - other.per_rep_abs_err[i] - mean;
      var += d * d / double(n - 1);
    }
    gap = mean;
    se = std::sqrt(var / double(n));
  };
  double gp, sp, ga, sa;
  paired_gap(per.at("pretest"), gp, sp);
  paired_gap(per.at("aic_star"), ga, sa);
  const bool pass = gp <= sp && ga <= sa;
  report("selected-estimator-mae", pass,
         fmt("S1/20k/200 curvature@100: MAE(FIC)-MAE(pretest) = %.4f (se %.4f), "
             "MAE(FIC)-MAE(AIC*) = %.4f (se %.4f); both <= 1 paired MC SE",
             gp, sp, ga, sa));
}

// Expected information at (a, b, sigma2) under left truncation at t, by
// quadrature over the unit-exponential law of the cumulative hazard past t.
// The efficient information for sigma2 is a sub-1% Schur residual of J here,
// so a Monte Carlo -H/n estimate of kappa is far too noisy to calibrate with.
double kappa_expected(double a, double b, double s, double t) {
  const double c = (a / b) * std::expm1(b * t);
  const ggsel::LoglikTerms tt = ggsel::detail::truncation_term(a, b, s, t, 1);
  auto score = [&](double v, int i) {
    const double g = (s == 0.0) ? c + v : ((1.0 + s * c) * std::exp(s * v) - 1.0) / s;
    const double y = std::log1p((b / a) * g) / b;
    const ggsel::LoglikTerms ot = ggsel::detail::loglik_obs_term(a, b, s, y, 1);
    return ot.grad[i] + tt.grad[i];
  };
  std::array<double, 6> acc{};
  for (int i = 0, k = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j, ++k) {
      acc[k] = oracles::integrate(
          [&](double v) { return score(v, i) * score(v, j) * std::exp(-v); }, 0.0,
          250.0, 1e-11);
    }
  }
  const math::Mat3 j = {acc[0], acc[1], acc[2], acc[1], acc[3],
                        acc[4], acc[2], acc[4], acc[5]};
  return std::sqrt(math::invert3(j)[8]);
}

void power_formulas() {
  const bool exact_ok = std::fabs(lrt_local_power(0.05, 0.0) - 0.05) <= 1e-12;
  const bool pre_ok = std::fabs(pretest_local_power(0.0) - 0.2005) <= 1e-4;

  // Simulated pretest rejection in the local regime the formula is derived
  // for: delta/kappa held at the S1-calibrated value r* = sqrt(10000) *
  // 0.0625 / kappa(S1 truth) while n = 40000, i.e. sigma2_n = r* kappa0 /
  // sqrt(n) with kappa0 taken at the null.
  const double kappa_s1 = kappa_expected(0.013, 0.092, 0.0625, 30.0);
  const double kappa0 = kappa_expected(0.013, 0.092, 0.0, 30.0);
  const double rstar = std::sqrt(10000.0) * 0.0625 / kappa_s1;
  const long long n_local = 40000;
  Scenario sc;
  sc.name = "custom";
  sc.params = {0.013, 0.092, rstar * kappa0 / std::sqrt(double(n_local))};
  sc.target_n = n_local;
  sc.replications = 500;
  sc.master_seed = 46;
  const auto m = run_scenario(sc, {"pretest"}, {{FocusKind::Sigma2, 0.0}});
  const double simulated = m.criteria.at("pretest").proportion_full;
  const double predicted = pretest_local_power(rstar);
  const double se = std::sqrt(predicted * (1.0 - predicted) / 500.0);
  const bool sim_ok = std::fabs(simulated - predicted) <= 2.0 * se;
  report("power-formulas", exact_ok && pre_ok && sim_ok,
         fmt("lrt_local_power(.05,0) = %.12f; pretest_local_power(0) = %.6f; "
             "simulated pretest %.3f vs formula %.3f at delta/kappa = %.3f "
             "(+/- %.3f = 2 MC SE)",
             lrt_local_power(0.05, 0.0), pretest_local_power(0.0), simulated,
             predicted, rstar, 2.0 * se));
}

void age_window_monotonicity() {
  double prop[3], se[3];
  const double windows[3] = {90.0, 85.0, 80.0};
  for (int i = 0; i < 3; ++i) {
    const auto m = scaled_run("S1", 10000, 100, 47, windows[i]);
    prop[i] = m.criteria.at("fic_mae:curvature@100").proportion_full;
    se[i] = m.criteria.at("fic_mae:curvature@100").mc_se;
  }
  auto ok = [&](int wide, int narrow) {
    return prop[wide] >= prop[narrow] -
                             2.0 * std::sqrt(se[wide] * se[wide] + se[narrow] * se[narrow]);
  };
  const bool pass = ok(1, 0) && ok(2, 1);
  report("age-window-monotonicity", pass,
         fmt("S1/10k/100 per window: 90+ %.3f, 85+ %.3f, 80+ %.3f "
             "(non-decreasing as the window widens, within MC error)",
             prop[0], prop[1], prop[2]));
}

void end_to_end_determinism() {
  Scenario sc = preset_scenario("S1");
  sc.target_n = 2000;
  sc.replications = 20;
  sc.master_seed = 42;
  const std::vector<FocusSpec> foci = {{FocusKind::Sigma2, 0.0},
                                       {FocusKind::LogHazardCurvature, 40.0}};
  const std::vector<std::string> crit = {"fic_mae", "pretest", "aic_star", "lrt"};

  const std::string a = io::metrics_to_json(run_scenario(sc, crit, foci)).dump();
  const std::string b = io::metrics_to_json(run_scenario(sc, crit, foci)).dump();
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const std::string c = io::metrics_to_json(run_scenario(sc, crit, foci)).dump();
  omp_set_num_threads(saved);
  const bool pass = a == b && a == c;
  report("end-to-end-determinism", pass,
         fmt("repeat run identical: %s; single-thread run identical: %s",
             a == b ? "yes" : "no", a == c ? "yes" : "no"));
}

}  // namespace

int main() {
  std::printf("ggsel acceptance suite\n");
  threshold_recovery();
  risk_formula_oracle();
  derivative_correctness();
  mixture_null_law();
  scaled_simulation_study();
  large_n_consistency();
  null_over_selection();
  selected_estimator_mae();
  power_formulas();
  age_window_monotonicity();
  end_to_end_determinism();
  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures;
}
