#pragma once

// Test-only oracles, independent of the implementation paths they check:
// adaptive quadrature, finite-difference steps for the likelihood
// derivatives, and a KS statistic.

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracles {

// Adaptive Simpson quadrature.
template <typename F>
double simpson(F&&, double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double integrate_rec(F&& f, double a, double b, double fa, double fm, double fb,
                     double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return integrate_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         integrate_rec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

// tol is relative to the integral's own scale, so large-magnitude integrands
// do not drive the refinement below the double rounding floor.
template <typename F>
double integrate(F&& f, double a, double b, double tol = 1e-10) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = simpson(f, a, b, fa, fm, fb);
  const double scaled_tol = tol * std::max(1.0, std::fabs(whole));
  return integrate_rec(f, a, b, fa, fm, fb, whole, scaled_tol, 48);
}

// Central-difference steps for the truncated log-likelihood. The sigma2 step
// respects the Taylor seam at 1e-5: probes never cross it, and on the series
// side (a quadratic in sigma2) any same-branch step is exact.
inline double grad_step_sigma2(double s) {
  if (s < 1e-5) return 0.45 * std::min(s, 1e-5 - s);
  return std::min(0.45 * (s - 1e-5), 1e-4 * std::max(s, 0.01));
}

inline double hess_step_sigma2(double s) {
  if (s < 1e-5) return 0.45 * std::min(s, 1e-5 - s);
  return std::min(0.45 * (s - 1e-5), 0.05 * std::max(s, 0.002));
}

// Kolmogorov-Smirnov statistic of sorted draws against an analytic cdf.
template <typename Cdf>
double ks_statistic(std::vector<double> draws, Cdf&& cdf) {
  std::sort(draws.begin(), draws.end());
  const double n = static_cast<double>(draws.size());
  double d = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const double F = cdf(draws[i]);
    d = std::max(d, std::fabs(F - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - F));
  }
  return d;
}

}  // namespace oracles
