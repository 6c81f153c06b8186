#pragma once

#include <functional>
#include <span>
#include <vector>

// Limited-memory BFGS minimizer used by CRF training. Internal API; kept in
// a header so the optimizer can be unit-tested on closed-form problems.
namespace morphtag::detail {

struct LbfgsParams {
  int history = 10;            // stored (s, y) pairs
  int max_iterations = 200;
  double gradient_tolerance = 1e-5;  // stop when max|g| <= tolerance
  double armijo_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  int max_line_search = 50;
};

struct LbfgsReport {
  int iterations = 0;
  bool converged = false;      // gradient tolerance reached
  double value = 0.0;
  double gradient_norm = 0.0;  // max-norm at the final point
};

/// Objective callback: writes the gradient into `grad` (same size as `x`)
/// and returns f(x).
using LbfgsObjective =
    std::function<double(std::span<const double> x, std::span<double> grad)>;

/// Per-iteration callback (after each accepted step).
using LbfgsMonitor = std::function<void(int iter, double value, double gnorm)>;

/// Minimizes f starting from `x` (updated in place). Line search is
/// backtracking Armijo with a curvature (Wolfe) acceptance test; pairs that
/// fail the curvature condition are not pushed into the history.
LbfgsReport lbfgs_minimize(std::vector<double>& x, const LbfgsObjective& f,
                           const LbfgsParams& params = {},
                           const LbfgsMonitor& monitor = nullptr);

/// Plain gradient descent with the same line search; fallback optimizer.
LbfgsReport gradient_descent_minimize(std::vector<double>& x,
                                      const LbfgsObjective& f,
                                      const LbfgsParams& params = {},
                                      const LbfgsMonitor& monitor = nullptr);

}  // namespace morphtag::detail
