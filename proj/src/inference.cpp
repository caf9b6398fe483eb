#include "ggsel/inference.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ggsel/errors.hpp"
#include "ggsel/loglik_kernel.hpp"
#include "ggsel/optimize.hpp"

namespace ggsel {

void Sample::validate() const {
  if (lifespans.empty()) {
    throw ArgumentError("Sample: needs at least one lifespan");
  }
  if (!(truncation >= 0.0) || !std::isfinite(truncation)) {
    throw ArgumentError("Sample: truncation must be finite and >= 0");
  }
  for (double y : lifespans) {
    if (!std::isfinite(y) || !(y > truncation)) {
      throw ArgumentError("Sample: every lifespan must exceed the truncation point");
    }
  }
}

double InfoQuantities::kappa() const { return std::sqrt(kappa2); }

double loglik(const ModelParams& p, const Sample& s) {
  p.validate();
  s.validate();
  return loglik_accumulate(p.a, p.b, p.sigma2, s.lifespans, s.truncation, 0).value;
}

LoglikDerivs loglik_derivs(const ModelParams& p, const Sample& s, int order) {
  p.validate();
  s.validate();
  const LoglikTerms t =
      loglik_accumulate(p.a, p.b, p.sigma2, s.lifespans, s.truncation, order);
  LoglikDerivs d;
  d.value = t.value;
  d.grad = t.grad;
  d.hess = {t.hess[0], t.hess[1], t.hess[3],
            t.hess[1], t.hess[2], t.hess[4],
            t.hess[3], t.hess[4], t.hess[5]};
  return d;
}

ModelParams gompertz_ls_start(const Sample& s) {
  // Occurrence-exposure rates on single years of y, then OLS of log-rate on
  // the interval midpoint.
  const double ymax = *std::max_element(s.lifespans.begin(), s.lifespans.end());
  const int k0 = static_cast<int>(std::floor(s.truncation));
  const int k1 = static_cast<int>(std::floor(ymax));
  const int nbin = k1 - k0 + 1;
  std::vector<double> deaths(nbin, 0.0), exposure(nbin, 0.0);
  for (double y : s.lifespans) {
    deaths[static_cast<int>(std::floor(y)) - k0] += 1.0;
    for (int k = k0; k <= static_cast<int>(std::floor(y)); ++k) {
      const double lo = std::max(s.truncation, static_cast<double>(k));
      const double hi = std::min(y, static_cast<double>(k + 1));
      if (hi > lo) exposure[k - k0] += hi - lo;
    }
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int k = 0; k < nbin; ++k) {
    if (deaths[k] > 0.0 && exposure[k] > 0.0) {
      const double x = k0 + k + 0.5;
      const double v = std::log(deaths[k] / exposure[k]);
      sx += x;
      sy += v;
      sxx += x * x;
      sxy += x * v;
      ++m;
    }
  }
  ModelParams p{0.01, 0.08, 0.0};
  if (m >= 2) {
    const double det = m * sxx - sx * sx;
    if (std::fabs(det) > 1e-12) {
      const double slope = (m * sxy - sx * sy) / det;
      const double icept = (sy - slope * sx) / m;
      p.b = std::clamp(slope, 1e-3, 1.5);
      p.a = std::clamp(std::exp(icept), 1e-10, 10.0);
    }
  }
  return p;
}

namespace {

struct StartOutcome {
  ModelParams params;
  double loglik;
  bool converged;
  bool used_fallback;
};

constexpr double kLogParamBound = 50.0;

// Maximize the log-likelihood over log-transformed coordinates. For the null
// model x = (ln a, ln b); for the full model x = (ln a, ln b, ln sigma2).
StartOutcome run_start(const Sample& s, const ModelParams& start, bool full,
                       const FitOptions& opt) {
  const std::size_t dim = full ? 3 : 2;
  math::Objective obj = [&](const std::vector<double>& x,
                            std::vector<double>* grad) -> double {
    for (double xi : x) {
      if (!(std::fabs(xi) <= kLogParamBound)) return HUGE_VAL;
    }
    const double a = std::exp(x[0]);
    const double b = std::exp(x[1]);
    const double s2 = full ? std::exp(x[2]) : 0.0;
    try {
      const LoglikTerms t = loglik_accumulate(a, b, s2, s.lifespans,
                                              s.truncation, grad ? 1 : 0);
      if (grad) {
        (*grad)[0] = -a * t.grad[0];
        (*grad)[1] = -b * t.grad[1];
        if (full) (*grad)[2] = -s2 * t.grad[2];
      }
      return -t.value;
    } catch (const DomainError&) {
      return HUGE_VAL;
    }
  };

  std::vector<double> x0 = {std::log(start.a), std::log(start.b)};
  if (full) x0.push_back(std::log(start.sigma2));
  math::OptimOptions oo;
  oo.max_iterations = opt.max_iterations;
  oo.grad_tol = opt.grad_tol;
  oo.stall_grad_tol = opt.stall_grad_tol;
  const math::OptimResult r = math::minimize_with_fallback(obj, x0, oo);

  StartOutcome out;
  out.converged = r.converged && std::isfinite(r.f) && r.x.size() == dim;
  out.used_fallback = r.used_fallback;
  out.loglik = -r.f;
  out.params = ModelParams{std::exp(r.x[0]), std::exp(r.x[1]),
                           full ? std::exp(r.x[2]) : 0.0};
  return out;
}

std::string diagnostics(const std::vector<StartOutcome>& runs) {
  std::ostringstream os;
  os << "no start converged;";
  for (const auto& r : runs) {
    os << " (a=" << r.params.a << " b=" << r.params.b << " s2=" << r.params.sigma2
       << " loglik=" << r.loglik << " converged=" << r.converged << ")";
  }
  return os.str();
}

math::Mat3 hessian_at(const ModelParams& p, const Sample& s) {
  return loglik_derivs(p, s, 2).hess;
}

}  // namespace

FitResult fit_null(const Sample& s, const FitOptions& opt) {
  s.validate();
  if (s.n() < 2) throw ArgumentError("fit_null: needs n >= 2");

  std::vector<ModelParams> starts = {gompertz_ls_start(s),
                                     {0.02, 0.09, 0.0},
                                     {0.005, 0.05, 0.0}};
  std::vector<StartOutcome> runs;
  for (const auto& st : starts) runs.push_back(run_start(s, st, false, opt));

  const StartOutcome* best = nullptr;
  for (const auto& r : runs) {
    if (r.converged && (!best || r.loglik > best->loglik)) best = &r;
  }
  if (!best) throw FitError("fit_null: " + diagnostics(runs));

  FitResult fit;
  fit.params = best->params;
  fit.params.sigma2 = 0.0;
  fit.loglik = best->loglik;
  fit.hessian = hessian_at(fit.params, s);
  fit.hessian_dim = 2;
  fit.converged = true;
  fit.n_starts_used = static_cast<int>(runs.size());
  fit.used_fallback = best->used_fallback;
  return fit;
}

FitResult fit_full(const Sample& s, const FitOptions& opt, const FitResult* null_fit) {
  s.validate();
  if (s.n() < 3) throw ArgumentError("fit_full: needs n >= 3");

  FitResult null_local;
  if (!null_fit) {
    null_local = fit_null(s, opt);
    null_fit = &null_local;
  }

  std::vector<StartOutcome> runs;
  for (double s2 : opt.sigma2_starts) {
    if (!(s2 > 0.0)) {
      throw ArgumentError("fit_full: sigma2 starts must be positive");
    }
    ModelParams st = null_fit->params;
    st.sigma2 = s2;
    runs.push_back(run_start(s, st, true, opt));
  }

  const StartOutcome* best = nullptr;
  for (const auto& r : runs) {
    if (r.converged && (!best || r.loglik > best->loglik)) best = &r;
  }

  FitResult fit;
  fit.n_starts_used = static_cast<int>(runs.size()) + 1;  // + boundary profile
  // Profiled boundary check: the interior family only wins if it clears the
  // sigma2 = 0 fit by more than the tie tolerance.
  if (!best || best->loglik <= null_fit->loglik + kBoundaryTieTol) {
    fit.params = null_fit->params;
    fit.params.sigma2 = 0.0;
    fit.loglik = null_fit->loglik;
    fit.hessian = null_fit->hessian;
    fit.boundary_hit = true;
    fit.converged = null_fit->converged;
  } else {
    fit.params = best->params;
    fit.loglik = best->loglik;
    fit.hessian = hessian_at(fit.params, s);
    fit.boundary_hit = false;
    fit.converged = true;
    fit.used_fallback = best->used_fallback;
  }
  fit.hessian_dim = 3;
  if (!fit.converged) throw FitError("fit_full: " + diagnostics(runs));
  return fit;
}

namespace {

InfoQuantities info_from_hessian(const math::Mat3& hess, const ModelParams& at,
                                 std::size_t n, double sigma2_hat) {
  if (n == 0) throw ArgumentError("info_quantities: n must be positive");
  math::Mat3 j;
  for (int i = 0; i < 9; ++i) j[i] = -hess[i] / static_cast<double>(n);
  j = math::symmetrize3(j);

  const math::Mat3 jinv = math::invert3(j, "J_full");
  InfoQuantities q;
  q.j_full = j;
  q.kappa2 = jinv[8];
  if (!(q.kappa2 > 0.0) || !std::isfinite(q.kappa2)) {
    throw NumericalError("info_quantities: kappa^2 = " + std::to_string(q.kappa2) +
                         " is not positive (|J|_F=" +
                         std::to_string(math::frobenius3(j)) + ", det=" +
                         std::to_string(math::det3(j)) + ")");
  }
  q.j00 = {j[0], j[1], j[3], j[4]};
  math::invert2(q.j00, "J00");  // singularity check with diagnostics
  q.j10 = {j[6], j[7]};
  q.delta_hat = std::sqrt(static_cast<double>(n)) * sigma2_hat;
  q.n = n;
  q.evaluated_at = at;
  return q;
}

}  // namespace

InfoQuantities info_quantities(const FitResult& fit_full, std::size_t n) {
  if (!fit_full.converged) {
    throw ArgumentError("info_quantities: full fit did not converge");
  }
  return info_from_hessian(fit_full.hessian, fit_full.params, n,
                           fit_full.params.sigma2);
}

InfoQuantities info_quantities_at(const ModelParams& at, const Sample& s,
                                  double sigma2_hat_full) {
  return info_from_hessian(loglik_derivs(at, s, 2).hess, at, s.n(), sigma2_hat_full);
}

std::array<double, 3> standard_errors(const FitResult& fit) {
  // Observed-information covariance (-H)^{-1}; diagonal square roots.
  if (fit.hessian_dim == 2) {
    const math::Mat2 negh = {-fit.hessian[0], -fit.hessian[1], -fit.hessian[3],
                             -fit.hessian[4]};
    const math::Mat2 cov = math::invert2(negh, "observed information (null)");
    return {std::sqrt(std::max(0.0, cov[0])), std::sqrt(std::max(0.0, cov[3])), 0.0};
  }
  math::Mat3 negh;
  for (int i = 0; i < 9; ++i) negh[i] = -fit.hessian[i];
  const math::Mat3 cov = math::invert3(negh, "observed information (full)");
  return {std::sqrt(std::max(0.0, cov[0])), std::sqrt(std::max(0.0, cov[4])),
          std::sqrt(std::max(0.0, cov[8]))};
}

}  // namespace ggsel
