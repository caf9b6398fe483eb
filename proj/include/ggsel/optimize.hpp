#pragma once

#include <functional>
#include <vector>

namespace ggsel::math {

// Objective for minimization. When grad != nullptr it must be filled with the
// gradient at x (same dimension as x). May return +inf to reject a point.
using Objective =
    std::function<double(const std::vector<double>&, std::vector<double>* grad)>;

struct OptimOptions {
  int max_iterations = 300;
  double grad_tol = 1e-8;        // scaled: ||g||_inf <= grad_tol * max(1, |f|)
  double stall_grad_tol = 1e-4;  // acceptance bar when the line search stalls
};

struct OptimResult {
  std::vector<double> x;
  double f = 0.0;
  std::vector<double> grad;
  int iterations = 0;
  bool converged = false;  // gradient criterion met (possibly after a stall)
  bool stalled = false;    // line search could make no further progress
  bool used_fallback = false;
};

// BFGS with backtracking line search and analytic gradients.
OptimResult minimize_bfgs(const Objective& f, std::vector<double> x0,
                          const OptimOptions& opt = {});

// Derivative-free Nelder-Mead; used as a fallback when BFGS fails.
OptimResult minimize_nelder_mead(const Objective& f, std::vector<double> x0,
                                 int max_evals = 2000);

// BFGS first, Nelder-Mead restart plus BFGS polish when it fails.
OptimResult minimize_with_fallback(const Objective& f, std::vector<double> x0,
                                   const OptimOptions& opt = {});

}  // namespace ggsel::math
