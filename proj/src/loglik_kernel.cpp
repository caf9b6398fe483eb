#include "ggsel/loglik_kernel.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "ggsel/errors.hpp"
#include "ggsel/model.hpp"

namespace ggsel {

namespace {

constexpr std::size_t kChunk = 2048;  // fixed: reduction order must not depend on threads

struct KParts {
  double k, ka, kb, ks;
  double kaa, kab, kbb, kas, kbs, kss;
};

// w/(1+w) - log(1+w); K_s = f(w)/s^2 exactly with w = s*G. The direct
// subtraction cancels to O(w^2), so small w switches to the series.
inline double f_of_w(double w) {
  if (w < 1e-3) {
    return -w * w *
           (0.5 - w * (2.0 / 3.0 - w * (0.75 - w * (0.8 - w * (5.0 / 6.0 - w * (6.0 / 7.0))))));
  }
  return w / (1.0 + w) - std::log1p(w);
}

// w^2/(1+w)^2 + 2 f(w); K_ss = -g(w)/s^3. Series coefficients are
// (-1)^k (k-1)(k-2)/k starting at k = 3.
inline double g_of_w(double w) {
  if (w < 1e-3) {
    return -w * w * w *
           (2.0 / 3.0 - w * (1.5 - w * (12.0 / 5.0 - w * (10.0 / 3.0 - w * (30.0 / 7.0)))));
  }
  const double q = w / (1.0 + w);
  return q * q + 2.0 * f_of_w(w);
}

// K = (1/s) log(1 + s G) with the sigma2 < 1e-5 Taylor branch. The series
// derivatives are the exact derivatives of the truncated series, so finite
// differences of the implemented value reproduce them to machine precision.
inline KParts k_parts(double g, double ga, double gb, double gab, double gbb,
                      double s, int order) {
  KParts r{};
  if (s < kSigma2TaylorThreshold) {
    const double q = 1.0 - s * g * (1.0 - s * g);  // truncated 1/(1+sG)
    r.k = g * (1.0 - s * g * (0.5 - s * g / 3.0));
    r.ka = ga * q;
    r.kb = gb * q;
    r.ks = g * g * (-0.5 + (2.0 / 3.0) * s * g);
    if (order >= 2) {
      const double dq = s * (2.0 * s * g - 1.0);  // d(q)/dG
      r.kaa = ga * ga * dq;
      r.kab = gab * q + ga * gb * dq;
      r.kbb = gbb * q + gb * gb * dq;
      const double m = g * (2.0 * s * g - 1.0);
      r.kas = ga * m;
      r.kbs = gb * m;
      r.kss = (2.0 / 3.0) * g * g * g;
    }
  } else {
    const double w = s * g;
    const double u = 1.0 + w;
    const double iu = 1.0 / u;
    const double iu2 = iu * iu;
    r.k = std::log1p(w) / s;
    r.ka = ga * iu;
    r.kb = gb * iu;
    r.ks = f_of_w(w) / (s * s);
    if (order >= 2) {
      r.kaa = -s * ga * ga * iu2;
      r.kab = gab * iu - s * ga * gb * iu2;
      r.kbb = gbb * iu - s * gb * gb * iu2;
      r.kas = -ga * g * iu2;
      r.kbs = -gb * g * iu2;
      r.kss = -g_of_w(w) / (s * s * s);
    }
  }
  return r;
}

inline void gompertz_parts(double a, double b, double x, double& g, double& ga,
                           double& gb, double& gab, double& gbb, int order) {
  if (b * x > 690.77) {
    throw DomainError("e^{b*y} overflows in log-likelihood at y = " + std::to_string(x));
  }
  const double e = std::exp(b * x);
  const double em1 = std::expm1(b * x);
  g = (a / b) * em1;
  ga = em1 / b;  // G/a
  gb = (a * x * e - g) / b;
  if (order >= 2) {
    gab = gb / a;
    gbb = (a * x * x * e) / b - 2.0 * gb / b;
  } else {
    gab = gbb = 0.0;
  }
}

}  // namespace

namespace detail {

LoglikTerms loglik_obs_term(double a, double b, double s, double x, int order) {
  double g, ga, gb, gab, gbb;
  gompertz_parts(a, b, x, g, ga, gb, gab, gbb, order);

  const KParts kp = k_parts(g, ga, gb, gab, gbb, s, order);
  const double u = 1.0 + s * g;
  const double iu = 1.0 / u;
  const double iu2 = iu * iu;

  LoglikTerms t;
  // ln f(x) = ln a + b x - L - K with L = log(1 + s G).
  t.value = std::log(a) + b * x - std::log1p(s * g) - kp.k;
  if (order >= 1) {
    t.grad[0] = 1.0 / a - s * ga * iu - kp.ka;
    t.grad[1] = x - s * gb * iu - kp.kb;
    t.grad[2] = -g * iu - kp.ks;
  }
  if (order >= 2) {
    t.hess[0] = -1.0 / (a * a) - (-s * s * ga * ga * iu2) - kp.kaa;
    t.hess[1] = -(s * gab * iu - s * s * ga * gb * iu2) - kp.kab;
    t.hess[2] = -(s * gbb * iu - s * s * gb * gb * iu2) - kp.kbb;
    t.hess[3] = -ga * iu2 - kp.kas;
    t.hess[4] = -gb * iu2 - kp.kbs;
    t.hess[5] = g * g * iu2 - kp.kss;
  }
  return t;
}

LoglikTerms truncation_term(double a, double b, double s, double t, int order) {
  LoglikTerms out;
  if (t == 0.0) return out;  // G(0) = 0, K(0) = 0
  double g, ga, gb, gab, gbb;
  gompertz_parts(a, b, t, g, ga, gb, gab, gbb, order);
  const KParts kp = k_parts(g, ga, gb, gab, gbb, s, order);
  out.value = kp.k;
  out.grad = {kp.ka, kp.kb, kp.ks};
  out.hess = {kp.kaa, kp.kab, kp.kbb, kp.kas, kp.kbs, kp.kss};
  return out;
}

}  // namespace detail

LoglikTerms loglik_accumulate_serial(double a, double b, double sigma2,
                                     std::span<const double> lifespans,
                                     double truncation, int order) {
  LoglikTerms total;
  for (double x : lifespans) {
    total += detail::loglik_obs_term(a, b, sigma2, x, order);
  }
  LoglikTerms tt = detail::truncation_term(a, b, sigma2, truncation, order);
  const double n = static_cast<double>(lifespans.size());
  total.value += n * tt.value;
  for (int i = 0; i < 3; ++i) total.grad[i] += n * tt.grad[i];
  for (int i = 0; i < 6; ++i) total.hess[i] += n * tt.hess[i];
  return total;
}

LoglikTerms loglik_accumulate(double a, double b, double sigma2,
                              std::span<const double> lifespans,
                              double truncation, int order) {
  const std::size_t n = lifespans.size();
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<LoglikTerms> partial(nchunks);
  bool failed = false;
  std::string fail_msg;

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(nchunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    const std::size_t hi = std::min(lo + kChunk, n);
    try {
      LoglikTerms acc;
      for (std::size_t i = lo; i < hi; ++i) {
        acc += detail::loglik_obs_term(a, b, sigma2, lifespans[i], order);
      }
      partial[static_cast<std::size_t>(c)] = acc;
    } catch (const Error& e) {
#pragma omp critical
      {
        failed = true;
        fail_msg = e.what();
      }
    }
  }
  if (failed) throw DomainError(fail_msg);

  LoglikTerms total;
  for (const LoglikTerms& p : partial) total += p;  // fixed fold order
  LoglikTerms tt = detail::truncation_term(a, b, sigma2, truncation, order);
  const double nn = static_cast<double>(n);
  total.value += nn * tt.value;
  for (int i = 0; i < 3; ++i) total.grad[i] += nn * tt.grad[i];
  for (int i = 0; i < 6; ++i) total.hess[i] += nn * tt.hess[i];
  return total;
}

}  // namespace ggsel
