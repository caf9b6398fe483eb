#pragma once

#include <cmath>

namespace ggsel::math {

inline constexpr double kSqrtTwoPi = 2.5066282746310005024;
inline constexpr double kSqrtTwoOverPi = 0.79788456080286535588;
inline constexpr double kSqrtTwo = 1.4142135623730950488;

// Standard normal density.
inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / kSqrtTwoPi;
}

// Standard normal cdf via erfc; accurate in both tails.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / kSqrtTwo);
}

// Inverse of normal_cdf. Rational approximation (Wichura's PPND16) refined
// by one Newton step against the erfc-based cdf; absolute error < 1e-13 on
// p in (1e-300, 1 - 1e-16). Throws ArgumentError outside (0, 1).
double normal_quantile(double p);

// Upper tail P(chi^2_1 > t).
inline double chi2_sf_1(double t) {
  return std::erfc(std::sqrt(0.5 * t));
}

// Bisection root finder on [lo, hi]; f(lo) and f(hi) must bracket a root.
template <typename F>
double bisect(F&& f, double lo, double hi, double tol, int max_iter = 200) {
  double flo = f(lo);
  for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if ((flo <= 0.0) == (fmid <= 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace ggsel::math
