#include "ggsel/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ggsel::math {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

bool grad_small(const std::vector<double>& g, double f, double tol) {
  return inf_norm(g) <= tol * std::max(1.0, std::fabs(f));
}

double eval(const Objective& f, const std::vector<double>& x,
            std::vector<double>* grad) {
  const double v = f(x, grad);
  return std::isfinite(v) ? v : kInf;
}

}  // namespace

OptimResult minimize_bfgs(const Objective& f, std::vector<double> x0,
                          const OptimOptions& opt) {
  const std::size_t n = x0.size();
  OptimResult res;
  res.x = std::move(x0);
  res.grad.assign(n, 0.0);
  res.f = eval(f, res.x, &res.grad);
  if (!std::isfinite(res.f)) return res;

  // Inverse-Hessian approximation, row-major, starts at identity.
  std::vector<double> hinv(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) hinv[i * n + i] = 1.0;

  std::vector<double> d(n), xn(n), gn(n), s(n), y(n), hy(n);
  int small_improvement_streak = 0;

  for (res.iterations = 0; res.iterations < opt.max_iterations; ++res.iterations) {
    if (grad_small(res.grad, res.f, opt.grad_tol)) {
      res.converged = true;
      return res;
    }

    double dg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = 0.0;
      for (std::size_t j = 0; j < n; ++j) d[i] -= hinv[i * n + j] * res.grad[j];
      dg += d[i] * res.grad[i];
    }
    if (!(dg < 0.0)) {  // not a descent direction: reset to steepest descent
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) hinv[i * n + j] = (i == j) ? 1.0 : 0.0;
        d[i] = -res.grad[i];
      }
      dg = -inf_norm(res.grad) * inf_norm(res.grad);
    }

    // Backtracking Armijo search.
    constexpr double c1 = 1e-4;
    double t = 1.0;
    double fn = kInf;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i) xn[i] = res.x[i] + t * d[i];
      fn = eval(f, xn, &gn);
      if (fn <= res.f + c1 * t * dg) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      res.stalled = true;
      res.converged = grad_small(res.grad, res.f, opt.stall_grad_tol);
      return res;
    }

    if (std::fabs(res.f - fn) <= 1e-14 * std::max(1.0, std::fabs(res.f))) {
      if (++small_improvement_streak >= 3) {
        res.x = xn;
        res.f = fn;
        res.grad = gn;
        res.stalled = true;
        res.converged = grad_small(gn, fn, opt.stall_grad_tol);
        return res;
      }
    } else {
      small_improvement_streak = 0;
    }

    double sy = 0.0, yy = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = t * d[i];
      y[i] = gn[i] - res.grad[i];
      sy += s[i] * y[i];
      yy += y[i] * y[i];
      ss += s[i] * s[i];
    }
    if (sy > 1e-12 * std::sqrt(yy * ss)) {
      const double rho = 1.0 / sy;
      for (std::size_t i = 0; i < n; ++i) {
        hy[i] = 0.0;
        for (std::size_t j = 0; j < n; ++j) hy[i] += hinv[i * n + j] * y[j];
      }
      double yhy = 0.0;
      for (std::size_t i = 0; i < n; ++i) yhy += y[i] * hy[i];
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          hinv[i * n + j] += rho * ((1.0 + rho * yhy) * s[i] * s[j] -
                                    hy[i] * s[j] - s[i] * hy[j]);
        }
      }
    }

    res.x = xn;
    res.f = fn;
    res.grad = gn;
  }
  res.converged = grad_small(res.grad, res.f, opt.stall_grad_tol);
  return res;
}

OptimResult minimize_nelder_mead(const Objective& f, std::vector<double> x0,
                                 int max_evals) {
  const std::size_t n = x0.size();
  struct Vertex {
    std::vector<double> x;
    double f;
  };
  std::vector<Vertex> simplex;
  simplex.reserve(n + 1);
  int evals = 0;
  auto value = [&](const std::vector<double>& x) {
    ++evals;
    return eval(f, x, nullptr);
  };

  simplex.push_back({x0, value(x0)});
  for (std::size_t i = 0; i < n; ++i) {
    auto x = x0;
    x[i] += 0.05 * std::max(1.0, std::fabs(x[i]));
    simplex.push_back({x, value(x)});
  }
  auto by_f = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };

  while (evals < max_evals) {
    std::sort(simplex.begin(), simplex.end(), by_f);
    const double spread = simplex.back().f - simplex.front().f;
    if (spread <= 1e-12 * std::max(1.0, std::fabs(simplex.front().f))) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[k].x[i];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    auto point = [&](double coef) {
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = centroid[i] + coef * (simplex.back().x[i] - centroid[i]);
      }
      return x;
    };

    auto xr = point(-1.0);
    const double fr = value(xr);
    if (fr < simplex.front().f) {
      auto xe = point(-2.0);
      const double fe = value(xe);
      simplex.back() = (fe < fr) ? Vertex{xe, fe} : Vertex{xr, fr};
    } else if (fr < simplex[n - 1].f) {
      simplex.back() = {xr, fr};
    } else {
      auto xc = point(0.5);
      const double fc = value(xc);
      if (fc < simplex.back().f) {
        simplex.back() = {xc, fc};
      } else {
        for (std::size_t k = 1; k <= n; ++k) {
          for (std::size_t i = 0; i < n; ++i) {
            simplex[k].x[i] = 0.5 * (simplex[k].x[i] + simplex[0].x[i]);
          }
          simplex[k].f = value(simplex[k].x);
        }
      }
    }
  }
  std::sort(simplex.begin(), simplex.end(), by_f);

  OptimResult res;
  res.x = simplex.front().x;
  res.f = simplex.front().f;
  res.grad.assign(n, 0.0);
  res.iterations = evals;
  res.converged = std::isfinite(res.f);
  return res;
}

OptimResult minimize_with_fallback(const Objective& f, std::vector<double> x0,
                                   const OptimOptions& opt) {
  OptimResult res = minimize_bfgs(f, x0, opt);
  if (res.converged) return res;

  OptimResult nm = minimize_nelder_mead(f, x0, 400 * static_cast<int>(x0.size()));
  if (!std::isfinite(nm.f)) return res;
  OptimResult polished = minimize_bfgs(f, nm.x, opt);
  polished.used_fallback = true;
  if (polished.f <= res.f || !std::isfinite(res.f)) return polished;
  return res;
}

}  // namespace ggsel::math
