#pragma once

#include <optional>
#include <string>

#include "ggsel/inference.hpp"

namespace ggsel {

enum class FocusKind { Sigma2, LogHazardCurvature, LogHazard, Survival };

// Focus parameter mu: the scalar the model choice is optimized for.
// y is on the years-since-origin scale (unused for Sigma2).
struct FocusSpec {
  FocusKind kind = FocusKind::Sigma2;
  double y = 0.0;
};

// "sigma2" | "curvature@<age>" | "loghaz@<age>" | "survival@<age>".
std::string focus_label(const FocusSpec& f, double origin_age);
FocusSpec parse_focus(const std::string& text, double origin_age);

// mu evaluated at arbitrary parameters (used for the selected-estimator
// metrics; reduces to the null-model value at sigma2 = 0).
double focus_value(const FocusSpec& f, const ModelParams& p);

// Asymptotic geometry of a focus at the null model.
struct FocusGeometry {
  FocusSpec spec;
  double mu_null = 0.0;                  // mu(theta-hat_null, 0)
  math::Vec2 dmu_dtheta{};               // d mu / d(a, b) at the null
  double dmu_dgamma = 0.0;               // d mu / d sigma2 at the null
  double tau0 = 0.0;                     // sqrt(dmu' J00^{-1} dmu)
  double omega = 0.0;                    // J10 J00^{-1} dmu - dmu_dgamma
};

FocusGeometry focus_geometry(const FocusSpec& f, const FitResult& fit_null,
                             const InfoQuantities& info);

enum class ModelChoice { Null, Full };

struct Intermediates {
  double delta = 0.0;
  double kappa = 0.0;
  double tau0 = 0.0;
  double omega = 0.0;
};

struct SelectionReport {
  std::string criterion;
  std::optional<std::string> focus;  // set for focus-dependent criteria
  double score_null = 0.0;
  double score_full = 0.0;
  ModelChoice chosen = ModelChoice::Null;  // ties resolve to the null model
  std::optional<Intermediates> intermediates;
};

// Limiting risks of the focus estimators under the boundary asymptotics.
// Closed forms; the tau0 = 0 ray is handled by its exact limits (requires
// delta >= 0, kappa > 0, tau0 >= 0).
double mae_limit_null(double tau0, double omega, double delta);
double mae_limit_full(double tau0, double omega, double delta, double kappa);
double mse_limit_null(double tau0, double omega, double delta);
double mse_limit_full(double tau0, double omega, double delta, double kappa);

// FIC targeting the limiting mean absolute error of mu-hat.
SelectionReport fic_mae(const FocusGeometry& g, const InfoQuantities& info);

// The two limiting mean squared errors (null, full) for a focus.
std::pair<double, double> mse_risks(const FocusGeometry& g, const InfoQuantities& info);

// MSE pre-test: full model iff delta-hat / kappa-hat > 0.8399. Scores are
// the MSE risks in boundary-parameter units (sigma2 focus).
SelectionReport pretest(const InfoQuantities& info);

// AIC with the boundary-bias correction 2*Phi(-delta/kappa) on the full
// model; the two-parameter null model keeps the standard penalty.
SelectionReport aic_star(const FitResult& fit_full, const FitResult& fit_null,
                         const InfoQuantities& info);

// Likelihood ratio test against the 50:50 mixture of a point mass at zero
// and chi^2_1.
struct LrtResult {
  double statistic = 0.0;
  double p_value = 1.0;
};
LrtResult lrt(const FitResult& fit_full, const FitResult& fit_null);

// Local power approximations (arguments on the delta/kappa scale).
double lrt_local_power(double alpha, double delta_over_kappa);
double pretest_local_power(double delta_over_kappa);
double pretest_local_power_mae(double delta_over_kappa);  // 0.6399 variant

// Tolerance radii. The named constants drive all runtime decisions; the
// solve_* routines recover them from the risk equalities by bisection and
// back the build-time transcription checks.
inline constexpr double kPretestRadius = 0.8399;
inline constexpr double kMaeSigma2Radius = 0.6399;
double solve_mse_tolerance_radius();
double solve_mae_sigma2_tolerance_radius();

}  // namespace ggsel
