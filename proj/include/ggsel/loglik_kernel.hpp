#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace ggsel {

// Accumulated value, gradient, and Hessian of the left-truncated
// gamma-Gompertz log-likelihood in natural (a, b, sigma2) coordinates.
// Hessian packing: (aa, ab, bb, as, bs, ss).
struct LoglikTerms {
  double value = 0.0;
  std::array<double, 3> grad{};
  std::array<double, 6> hess{};

  LoglikTerms& operator+=(const LoglikTerms& o) {
    value += o.value;
    for (int i = 0; i < 3; ++i) grad[i] += o.grad[i];
    for (int i = 0; i < 6; ++i) hess[i] += o.hess[i];
    return *this;
  }
};

// order: 0 = value only, 1 = value + gradient, 2 = + Hessian.
//
// Serial reference: one left-to-right pass over the observations. Kept for
// testing and benchmarking against the parallel kernel.
LoglikTerms loglik_accumulate_serial(double a, double b, double sigma2,
                                     std::span<const double> lifespans,
                                     double truncation, int order);

// OpenMP kernel. Observations are summed in fixed-size chunks and the chunk
// partials are folded in index order, so the result is bit-identical for any
// thread count (including one) but may differ from the serial reference in
// the last few ulps.
LoglikTerms loglik_accumulate(double a, double b, double sigma2,
                              std::span<const double> lifespans,
                              double truncation, int order);

namespace detail {

// Single-observation contribution ln f(x) (without the truncation term) and
// its derivatives; also used for the truncation correction via k_only.
LoglikTerms loglik_obs_term(double a, double b, double sigma2, double x, int order);

// K(t) = (1/s) ln(1 + s G(t)) and derivatives; the truncation correction is
// +n * K(t). Uses the same Taylor branch as the observation terms.
LoglikTerms truncation_term(double a, double b, double sigma2, double t, int order);

}  // namespace detail

}  // namespace ggsel
