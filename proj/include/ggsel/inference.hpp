#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ggsel/linalg.hpp"
#include "ggsel/model.hpp"

namespace ggsel {

// Individual lifespans on the years-since-origin scale with a common left
// truncation point. Every lifespan must exceed the truncation.
struct Sample {
  std::vector<double> lifespans;
  double truncation = 0.0;

  void validate() const;
  std::size_t n() const { return lifespans.size(); }
};

// Result of a maximum-likelihood fit. The stored Hessian is the full 3x3
// matrix of second derivatives in (a, b, sigma2) at the reported optimum;
// for the null model only the 2x2 (a, b) block is the model Hessian (the
// sigma2 row/column is the curvature of the embedding family at sigma2 = 0,
// which the information-at-null sensitivity switch reuses).
struct FitResult {
  ModelParams params;
  double loglik = 0.0;
  math::Mat3 hessian{};
  int hessian_dim = 3;  // 2 for the null model, 3 for the full model
  bool converged = false;
  int n_starts_used = 0;
  bool boundary_hit = false;  // full model only: sigma2-hat pinned at 0
  bool used_fallback = false;
};

// Information-matrix quantities evaluated from J = -H/n.
struct InfoQuantities {
  math::Mat3 j_full{};
  math::Mat2 j00{};   // theta block (a, b)
  math::Vec2 j10{};   // gamma-theta cross block (row)
  double kappa2 = 0.0;  // (J^{-1})_{gamma gamma}
  double delta_hat = 0.0;  // sqrt(n) * sigma2-hat
  std::size_t n = 0;
  ModelParams evaluated_at;

  double kappa() const;
  double delta_over_kappa() const { return delta_hat / kappa(); }
};

struct FitOptions {
  std::vector<double> sigma2_starts = {1e-6, 1e-3, 0.01, 0.05, 0.1, 0.25};
  int max_iterations = 300;
  double grad_tol = 1e-8;
  double stall_grad_tol = 1e-4;
};

// An interior candidate beats the sigma2 = 0 profile fit only if its
// log-likelihood exceeds the boundary value by more than this; keeps
// optimizer noise from turning exact boundary ties into spurious T > 0.
inline constexpr double kBoundaryTieTol = 1e-6;

// Log-likelihood sum_i [ln f(y_i) - ln S(truncation)] and derivative
// variants in natural (a, b, sigma2) coordinates. The Taylor branch below
// sigma2 = 1e-5 is applied consistently to value, gradient, and Hessian.
double loglik(const ModelParams& p, const Sample& s);
struct LoglikDerivs {
  double value;
  std::array<double, 3> grad;   // d/d(a, b, sigma2)
  math::Mat3 hess;              // symmetric 3x3
};
LoglikDerivs loglik_derivs(const ModelParams& p, const Sample& s, int order = 2);

// Gompertz fit (sigma2 fixed at 0), maximized over log-parameters.
FitResult fit_null(const Sample& s, const FitOptions& opt = {});

// Gamma-Gompertz fit over sigma2 >= 0: a grid of log-sigma2 starts plus an
// explicit profile comparison against the sigma2 = 0 boundary.
FitResult fit_full(const Sample& s, const FitOptions& opt = {},
                   const FitResult* null_fit = nullptr);

// J_full = -H/n at the full-model MLE; kappa^2 and delta-hat per the
// boundary asymptotics.
InfoQuantities info_quantities(const FitResult& fit_full, std::size_t n);

// Sensitivity variant: J evaluated at an arbitrary point (typically the null
// fit with sigma2 = 0) while delta-hat still comes from the full-model MLE.
InfoQuantities info_quantities_at(const ModelParams& at, const Sample& s,
                                  double sigma2_hat_full);

// Standard errors from (-H)^{-1}; meaningful at interior optima only.
std::array<double, 3> standard_errors(const FitResult& fit);

// Least-squares Gompertz start from empirical single-year log-rates.
ModelParams gompertz_ls_start(const Sample& s);

}  // namespace ggsel
