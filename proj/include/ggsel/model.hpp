#pragma once

#include <optional>
#include <random>
#include <vector>

namespace ggsel {

// Parameters of the gamma-Gompertz family on the years-since-origin scale:
// baseline hazard a*exp(b*y) and gamma frailty with mean 1 and variance
// sigma2 at y = 0. sigma2 == 0 is the plain Gompertz sub-model.
struct ModelParams {
  double a = 0.0;       // baseline level, per year, > 0
  double b = 0.0;       // Gompertz slope, per year, > 0
  double sigma2 = 0.0;  // frailty variance at origin, >= 0

  void validate() const;  // throws ArgumentError on violation
};

// Mapping between calendar age and the model's time scale: origin_age is the
// calendar age corresponding to y = 0.
struct AgeScale {
  double origin_age = 60.0;
  double truncation_age = 90.0;

  void validate() const;
  double to_years_since_origin(double age) const { return age - origin_age; }
  double truncation_offset() const { return truncation_age - origin_age; }
};

// Below this value of sigma2 all (1/sigma2)-scaled log terms switch to a
// Taylor expansion; the expansion keeps terms through sigma2^2 in the
// exponent of survival/density (error O(sigma2^3 G^4)).
inline constexpr double kSigma2TaylorThreshold = 1e-5;

// Marginal hazard a e^{by} / (1 + sigma2 (a/b)(e^{by}-1)). For sigma2 > 0 it
// is bounded by b/sigma2. Throws DomainError when e^{by} overflows.
double hazard(const ModelParams& p, double y);

// Survival (1 + sigma2 G(y))^{-1/sigma2}, Taylor-stabilized near sigma2 = 0.
double survival(const ModelParams& p, double y);

// Density = hazard * survival, evaluated in log space.
double density(const ModelParams& p, double y);
double log_density(const ModelParams& p, double y);

// Second derivative of the log-hazard in y; identically 0 for sigma2 = 0 and
// strictly negative for sigma2 > 0, y > 0.
double log_hazard_curvature(const ModelParams& p, double y);

// Inverse cdf: the y with 1 - survival(y) = prob. Requires 0 <= prob < 1.
double quantile(const ModelParams& p, double prob);

// i.i.d. lifespans by inversion. With conditional_on = y_L the draws follow
// the law of Y given Y > y_L (inverse-cdf scaling, no rejection), so every
// returned value exceeds y_L.
std::vector<double> sample_lifespans(const ModelParams& p, std::size_t n,
                                     std::mt19937_64& rng,
                                     std::optional<double> conditional_on = {});

namespace detail {

// (1/s) * log(1 + s*g), the exponent of the survival function. Split out so
// tests can check continuity across the stabilization seam.
double k_term_exact(double g, double s);
double k_term_series(double g, double s);
double k_term(double g, double s);

// Cumulative baseline hazard G(y) = (a/b)(e^{by}-1); throws DomainError when
// e^{by} exceeds ~1e300.
double gompertz_cumhaz(double a, double b, double y);

// Solve survival(y) = starget exactly in the survival scale; used by the
// conditional sampler to avoid cancellation for deep truncations.
double quantile_from_survival(const ModelParams& p, double starget);

}  // namespace detail

}  // namespace ggsel
