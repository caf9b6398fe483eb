#include "ggsel/selection.hpp"

#include <cmath>
#include <sstream>

#include "ggsel/errors.hpp"
#include "ggsel/special.hpp"

namespace ggsel {

using math::normal_cdf;
using math::normal_pdf;

std::string focus_label(const FocusSpec& f, double origin_age) {
  auto age = [&] {
    std::ostringstream os;
    const double v = origin_age + f.y;
    if (v == std::floor(v)) {
      os << static_cast<long long>(v);
    } else {
      os << v;
    }
    return os.str();
  };
  switch (f.kind) {
    case FocusKind::Sigma2:
      return "sigma2";
    case FocusKind::LogHazardCurvature:
      return "curvature@" + age();
    case FocusKind::LogHazard:
      return "loghaz@" + age();
    case FocusKind::Survival:
      return "survival@" + age();
  }
  return "?";
}

FocusSpec parse_focus(const std::string& text, double origin_age) {
  if (text == "sigma2") return {FocusKind::Sigma2, 0.0};
  const auto at = text.find('@');
  if (at == std::string::npos) {
    throw ArgumentError("focus '" + text +
                        "': expected sigma2 | curvature@AGE | loghaz@AGE | survival@AGE");
  }
  const std::string kind = text.substr(0, at);
  double age;
  try {
    size_t used = 0;
    age = std::stod(text.substr(at + 1), &used);
    if (used != text.size() - at - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ArgumentError("focus '" + text + "': bad age");
  }
  const double y = age - origin_age;
  if (!(y >= 0.0)) {
    throw ArgumentError("focus '" + text + "': age must be >= origin age");
  }
  if (kind == "curvature") return {FocusKind::LogHazardCurvature, y};
  if (kind == "loghaz") return {FocusKind::LogHazard, y};
  if (kind == "survival") return {FocusKind::Survival, y};
  throw ArgumentError("focus '" + text + "': unknown kind '" + kind + "'");
}

double focus_value(const FocusSpec& f, const ModelParams& p) {
  switch (f.kind) {
    case FocusKind::Sigma2:
      return p.sigma2;
    case FocusKind::LogHazardCurvature:
      return log_hazard_curvature(p, f.y);
    case FocusKind::LogHazard:
      return std::log(hazard(p, f.y));
    case FocusKind::Survival:
      return survival(p, f.y);
  }
  return 0.0;
}

FocusGeometry focus_geometry(const FocusSpec& f, const FitResult& fit_null,
                             const InfoQuantities& info) {
  if (!fit_null.converged) {
    throw ArgumentError("focus_geometry: null fit did not converge");
  }
  const double a = fit_null.params.a;
  const double b = fit_null.params.b;

  FocusGeometry g;
  g.spec = f;
  switch (f.kind) {
    case FocusKind::Sigma2:
      g.dmu_dtheta = {0.0, 0.0};
      g.dmu_dgamma = 1.0;
      break;
    case FocusKind::LogHazardCurvature:
      // mu vanishes on the whole null manifold, so the theta gradient is 0.
      g.dmu_dtheta = {0.0, 0.0};
      g.dmu_dgamma = -a * b * std::exp(b * f.y);
      break;
    case FocusKind::LogHazard:
      g.dmu_dtheta = {1.0 / a, f.y};
      g.dmu_dgamma = -detail::gompertz_cumhaz(a, b, f.y);
      break;
    case FocusKind::Survival: {
      const double e = std::exp(b * f.y);
      const double gc = detail::gompertz_cumhaz(a, b, f.y);
      const double surv = std::exp(-gc);
      const double gb = (a * f.y * e - gc) / b;  // dG/db
      g.dmu_dtheta = {-surv * gc / a, -surv * gb};
      g.dmu_dgamma = surv * gc * gc / 2.0;
      break;
    }
  }
  g.mu_null = focus_value(f, {a, b, 0.0});

  const math::Mat2 j00inv = math::invert2(info.j00, "J00");
  const math::Vec2 j00inv_d = math::mul2(j00inv, g.dmu_dtheta);
  g.tau0 = std::sqrt(std::max(0.0, math::dot2(g.dmu_dtheta, j00inv_d)));
  g.omega = math::dot2(info.j10, j00inv_d) - g.dmu_dgamma;
  return g;
}

namespace {

void require_geometry(double tau0, double delta, double kappa, const char* where) {
  if (!(tau0 >= 0.0) || !(delta >= 0.0) || !(kappa > 0.0)) {
    std::ostringstream os;
    os << where << ": needs tau0 >= 0, delta >= 0, kappa > 0 (got tau0=" << tau0
       << " delta=" << delta << " kappa=" << kappa << ")";
    throw ArgumentError(os.str());
  }
}

// Phi(m / tau0) with the exact tau0 -> 0 limit (step function).
double cdf_ratio(double m, double tau0) {
  if (tau0 > 0.0) return normal_cdf(m / tau0);
  if (m > 0.0) return 1.0;
  if (m < 0.0) return 0.0;
  return 0.5;
}

}  // namespace

double mae_limit_null(double tau0, double omega, double delta) {
  if (!(tau0 >= 0.0) || !(delta >= 0.0)) {
    throw ArgumentError("mae_limit_null: needs tau0 >= 0 and delta >= 0");
  }
  const double m = omega * delta;
  if (tau0 == 0.0) return std::fabs(m);
  return 2.0 * tau0 * normal_pdf(m / tau0) + 2.0 * m * (normal_cdf(m / tau0) - 0.5);
}

double mae_limit_full(double tau0, double omega, double delta, double kappa) {
  require_geometry(tau0, delta, kappa, "mae_limit_full");
  const double m = omega * delta;
  const double r = delta / kappa;
  const double spread = std::hypot(tau0, omega * kappa);
  const double bracket = mae_limit_null(tau0, omega, delta);
  // Phi(r * spread / tau0): for tau0 = 0 the argument degenerates to
  // sign(delta) * infinity; delta = 0 keeps the argument at exactly 0.
  const double big = (tau0 > 0.0) ? normal_cdf(r * spread / tau0)
                                  : (delta > 0.0 ? 1.0 : 0.5);
  const double centered = cdf_ratio(m, tau0) - 0.5;
  return bracket * (1.0 - normal_cdf(r)) + spread * math::kSqrtTwoOverPi * big -
         omega * kappa * normal_pdf(r) * 2.0 * centered;
}

double mse_limit_null(double tau0, double omega, double delta) {
  return tau0 * tau0 + omega * omega * delta * delta;
}

double mse_limit_full(double tau0, double omega, double delta, double kappa) {
  require_geometry(tau0, delta, kappa, "mse_limit_full");
  const double r = delta / kappa;
  return tau0 * tau0 +
         omega * omega *
             (delta * delta * normal_cdf(-r) - kappa * delta * normal_pdf(r) +
              kappa * kappa * normal_cdf(r));
}

namespace {

void check_finite(double v, const char* term) {
  if (!std::isfinite(v)) {
    throw NumericalError(std::string("fic_mae: non-finite ") + term);
  }
}

}  // namespace

SelectionReport fic_mae(const FocusGeometry& g, const InfoQuantities& info) {
  const double kappa = info.kappa();
  if (!(kappa > 0.0)) throw ArgumentError("fic_mae: needs kappa > 0");
  const double delta = info.delta_hat;

  SelectionReport rep;
  rep.criterion = "fic_mae";
  rep.score_null = mae_limit_null(g.tau0, g.omega, delta);
  rep.score_full = mae_limit_full(g.tau0, g.omega, delta, kappa);
  check_finite(rep.score_null, "FIC_MAE(null)");
  check_finite(rep.score_full, "FIC_MAE(full)");
  rep.chosen = rep.score_full < rep.score_null ? ModelChoice::Full : ModelChoice::Null;
  rep.intermediates = Intermediates{delta, kappa, g.tau0, g.omega};
  return rep;
}

std::pair<double, double> mse_risks(const FocusGeometry& g, const InfoQuantities& info) {
  const double kappa = info.kappa();
  if (!(kappa > 0.0)) throw ArgumentError("mse_risks: needs kappa > 0");
  return {mse_limit_null(g.tau0, g.omega, info.delta_hat),
          mse_limit_full(g.tau0, g.omega, info.delta_hat, kappa)};
}

SelectionReport pretest(const InfoQuantities& info) {
  const double kappa = info.kappa();
  if (!(kappa > 0.0)) throw ArgumentError("pretest: needs kappa > 0");
  const double delta = info.delta_hat;

  SelectionReport rep;
  rep.criterion = "pretest";
  rep.score_null = mse_limit_null(0.0, 1.0, delta);
  rep.score_full = mse_limit_full(0.0, 1.0, delta, kappa);
  rep.chosen = (delta / kappa > kPretestRadius) ? ModelChoice::Full : ModelChoice::Null;
  rep.intermediates = Intermediates{delta, kappa, 0.0, 1.0};
  return rep;
}

SelectionReport aic_star(const FitResult& fit_full, const FitResult& fit_null,
                         const InfoQuantities& info) {
  const double r = info.delta_over_kappa();
  SelectionReport rep;
  rep.criterion = "aic_star";
  rep.score_null = -2.0 * fit_null.loglik + 4.0;
  rep.score_full = -2.0 * fit_full.loglik + 6.0 - 2.0 * normal_cdf(-r);
  rep.chosen = rep.score_full < rep.score_null ? ModelChoice::Full : ModelChoice::Null;
  rep.intermediates = Intermediates{info.delta_hat, info.kappa(), 0.0, 0.0};
  return rep;
}

LrtResult lrt(const FitResult& fit_full, const FitResult& fit_null) {
  const double t = 2.0 * (fit_full.loglik - fit_null.loglik);
  if (t < -1e-6) {
    throw NumericalError("lrt: nesting violated, loglik(full) < loglik(null) by " +
                         std::to_string(-t / 2.0));
  }
  LrtResult r;
  r.statistic = std::max(0.0, t);
  r.p_value = (r.statistic == 0.0) ? 1.0 : 0.5 * math::chi2_sf_1(r.statistic);
  return r;
}

double lrt_local_power(double alpha, double delta_over_kappa) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ArgumentError("lrt_local_power: alpha must lie in (0, 1)");
  }
  return 1.0 - normal_cdf(math::normal_quantile(1.0 - alpha) - delta_over_kappa);
}

double pretest_local_power(double delta_over_kappa) {
  return 1.0 - normal_cdf(kPretestRadius - delta_over_kappa);
}

double pretest_local_power_mae(double delta_over_kappa) {
  return 1.0 - normal_cdf(kMaeSigma2Radius - delta_over_kappa);
}

double solve_mse_tolerance_radius() {
  // Equality of the two MSE risks (omega factored out), in r = delta/kappa:
  // r^2 Phi(-r) - r phi(r) + Phi(r) = r^2.
  auto eq = [](double r) {
    return r * r * normal_cdf(-r) - r * normal_pdf(r) + normal_cdf(r) - r * r;
  };
  return math::bisect(eq, 0.3, 1.5, 1e-12);
}

double solve_mae_sigma2_tolerance_radius() {
  // Equality of the two MAE risks for the sigma2 focus, in r = delta/kappa:
  // r = sqrt(2/pi) - phi(r) + r Phi(-r).
  auto eq = [](double r) {
    return math::kSqrtTwoOverPi - normal_pdf(r) + r * normal_cdf(-r) - r;
  };
  return math::bisect(eq, 0.2, 1.2, 1e-12);
}

}  // namespace ggsel
