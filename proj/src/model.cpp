#include "ggsel/model.hpp"

#include <cmath>
#include <string>

#include "ggsel/errors.hpp"
#include "ggsel/rng.hpp"

namespace ggsel {

namespace {

// exp(b*y) beyond this overflows the 1e300 guard.
constexpr double kMaxExponent = 690.77;

void check_y(double y) {
  if (!(y >= 0.0) || !std::isfinite(y)) {
    throw ArgumentError("y must be finite and >= 0, got " + std::to_string(y));
  }
}

void check_exponent(double b, double y) {
  if (b * y > kMaxExponent) {
    throw DomainError("e^{b*y} overflows at y = " + std::to_string(y));
  }
}

}  // namespace

void ModelParams::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw ArgumentError("ModelParams: a must be finite and > 0");
  }
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw ArgumentError("ModelParams: b must be finite and > 0");
  }
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
    throw ArgumentError("ModelParams: sigma2 must be finite and >= 0");
  }
}

void AgeScale::validate() const {
  if (!std::isfinite(origin_age) || !std::isfinite(truncation_age)) {
    throw ArgumentError("AgeScale: ages must be finite");
  }
  if (truncation_age < origin_age) {
    throw ArgumentError("AgeScale: truncation_age must be >= origin_age");
  }
}

namespace detail {

double gompertz_cumhaz(double a, double b, double y) {
  check_exponent(b, y);
  const double g = (a / b) * std::expm1(b * y);
  if (!std::isfinite(g)) {
    throw DomainError("cumulative hazard overflows at y = " + std::to_string(y));
  }
  return g;
}

double k_term_exact(double g, double s) { return std::log1p(s * g) / s; }

double k_term_series(double g, double s) {
  return g * (1.0 - s * g * (0.5 - s * g / 3.0));
}

double k_term(double g, double s) {
  return s < kSigma2TaylorThreshold ? k_term_series(g, s) : k_term_exact(g, s);
}

double quantile_from_survival(const ModelParams& p, double starget) {
  // Solves (1 + s*G)^{-1/s} = starget for y.
  const double s = p.sigma2;
  const double ls = std::log(starget);
  const double arg =  // (b/a) * G(y)
      (s == 0.0) ? -(p.b / p.a) * ls
                 : (p.b / (p.a * s)) * std::expm1(-s * ls);
  return std::log1p(arg) / p.b;
}

}  // namespace detail

double hazard(const ModelParams& p, double y) {
  p.validate();
  check_y(y);
  const double g = detail::gompertz_cumhaz(p.a, p.b, y);
  const double h = std::exp(std::log(p.a) + p.b * y - std::log1p(p.sigma2 * g));
  if (!std::isfinite(h)) {
    throw DomainError("hazard overflows at y = " + std::to_string(y));
  }
  return h;
}

double survival(const ModelParams& p, double y) {
  p.validate();
  check_y(y);
  const double g = detail::gompertz_cumhaz(p.a, p.b, y);
  return std::exp(-detail::k_term(g, p.sigma2));
}

double log_density(const ModelParams& p, double y) {
  p.validate();
  check_y(y);
  const double g = detail::gompertz_cumhaz(p.a, p.b, y);
  return std::log(p.a) + p.b * y - std::log1p(p.sigma2 * g) -
         detail::k_term(g, p.sigma2);
}

double density(const ModelParams& p, double y) { return std::exp(log_density(p, y)); }

double log_hazard_curvature(const ModelParams& p, double y) {
  p.validate();
  check_y(y);
  const double s = p.sigma2;
  if (s == 0.0) return 0.0;
  const double g = detail::gompertz_cumhaz(p.a, p.b, y);
  const double e = std::exp(p.b * y);
  const double gp = p.a * e;        // G'(y)
  const double gpp = p.a * p.b * e; // G''(y)
  const double u = 1.0 + s * g;
  return -s * (gpp * u - s * gp * gp) / (u * u);
}

double quantile(const ModelParams& p, double prob) {
  p.validate();
  if (!(prob >= 0.0 && prob < 1.0)) {
    throw ArgumentError("quantile: probability must lie in [0, 1), got " +
                        std::to_string(prob));
  }
  if (prob == 0.0) return 0.0;
  const double s = p.sigma2;
  // Same closed forms as quantile_from_survival but in terms of log1p(-prob),
  // which is exact for small probabilities.
  const double l1mp = std::log1p(-prob);
  double arg;
  if (s == 0.0) {
    arg = -(p.b / p.a) * l1mp;
  } else {
    arg = (p.b / (p.a * s)) * std::expm1(-s * l1mp);
  }
  return std::log1p(arg) / p.b;
}

std::vector<double> sample_lifespans(const ModelParams& p, std::size_t n,
                                     std::mt19937_64& rng,
                                     std::optional<double> conditional_on) {
  p.validate();
  double s_floor = 1.0;
  if (conditional_on) {
    if (!(*conditional_on >= 0.0)) {
      throw ArgumentError("conditional_on must be >= 0");
    }
    s_floor = survival(p, *conditional_on);
  }
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = math::uniform01(rng);  // in (0,1), never hits endpoints
    out.push_back(detail::quantile_from_survival(p, u * s_floor));
  }
  return out;
}

}  // namespace ggsel
