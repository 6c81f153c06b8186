#include "morphtag/detail/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>

namespace morphtag::detail {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

struct Pair {
  std::vector<double> s;  // x_{k+1} - x_k
  std::vector<double> y;  // g_{k+1} - g_k
  double rho = 0.0;       // 1 / (y . s)
};

// Two-loop recursion: d = -H g using the stored curvature pairs.
std::vector<double> lbfgs_direction(const std::deque<Pair>& memory,
                                    const std::vector<double>& g) {
  std::vector<double> q = g;
  std::vector<double> alpha(memory.size());
  for (std::size_t i = memory.size(); i-- > 0;) {
    alpha[i] = memory[i].rho * dot(memory[i].s, q);
    for (std::size_t j = 0; j < q.size(); ++j) {
      q[j] -= alpha[i] * memory[i].y[j];
    }
  }
  if (!memory.empty()) {
    const Pair& last = memory.back();
    const double yy = dot(last.y, last.y);
    if (yy > 0.0) {
      const double gamma = 1.0 / (last.rho * yy);
      for (double& x : q) x *= gamma;
    }
  }
  for (std::size_t i = 0; i < memory.size(); ++i) {
    const double beta = memory[i].rho * dot(memory[i].y, q);
    for (std::size_t j = 0; j < q.size(); ++j) {
      q[j] += memory[i].s[j] * (alpha[i] - beta);
    }
  }
  for (double& x : q) x = -x;
  return q;
}

LbfgsReport minimize(std::vector<double>& x, const LbfgsObjective& f,
                     const LbfgsParams& params, const LbfgsMonitor& monitor,
                     bool use_memory) {
  const std::size_t n = x.size();
  LbfgsReport report;
  std::vector<double> g(n, 0.0), new_g(n, 0.0);
  double fx = f(x, g);
  report.value = fx;
  report.gradient_norm = max_norm(g);
  if (report.gradient_norm <= params.gradient_tolerance) {
    report.converged = true;
    return report;
  }

  std::deque<Pair> memory;
  std::vector<double> direction(n), next(n);

  for (int iter = 1; iter <= params.max_iterations; ++iter) {
    direction = use_memory ? lbfgs_direction(memory, g) : g;
    if (!use_memory) {
      for (double& d : direction) d = -d;
    }
    double dg = dot(direction, g);
    if (dg >= 0.0) {
      // Numerical breakdown; restart from steepest descent.
      memory.clear();
      for (std::size_t i = 0; i < n; ++i) direction[i] = -g[i];
      dg = dot(direction, g);
      if (dg >= 0.0) break;  // gradient is numerically zero
    }

    // Bracketing line search: overshooting the sufficient-decrease bound
    // shrinks the bracket, an overly steep slope grows it. Quasi-Newton
    // updates need the slope condition so the curvature pairs stay
    // well-conditioned; plain descent only needs the decrease.
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double step = 1.0;
    double new_fx = fx;
    bool accepted = false;
    bool slope_ok = false;
    double fallback_fx = 0.0;
    std::vector<double> fallback_x, fallback_g;
    for (int ls = 0; ls < params.max_line_search; ++ls) {
      for (std::size_t i = 0; i < n; ++i) next[i] = x[i] + step * direction[i];
      new_fx = f(next, new_g);
      if (!std::isfinite(new_fx) ||
          new_fx > fx + params.armijo_c1 * step * dg) {
        hi = step;
        step = 0.5 * (lo + hi);
        continue;
      }
      if (use_memory && dot(new_g, direction) < params.wolfe_c2 * dg) {
        accepted = true;
        fallback_fx = new_fx;
        fallback_x = next;
        fallback_g = new_g;
        lo = step;
        step = std::isinf(hi) ? 2.0 * step : 0.5 * (lo + hi);
        continue;
      }
      accepted = true;
      slope_ok = true;
      break;
    }
    if (!accepted) break;  // no acceptable decrease; stay at the current point
    if (!slope_ok && !fallback_x.empty()) {
      // The bracket closed before the slope flattened; keep the best point
      // that still made sufficient progress.
      new_fx = fallback_fx;
      next = std::move(fallback_x);
      new_g = std::move(fallback_g);
    }

    if (use_memory) {
      Pair pair;
      pair.s.resize(n);
      pair.y.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        pair.s[i] = next[i] - x[i];
        pair.y[i] = new_g[i] - g[i];
      }
      const double ys = dot(pair.y, pair.s);
      // Curvature (Wolfe) safeguard: only well-conditioned pairs enter the
      // memory, which keeps the implicit Hessian positive definite.
      const double curvature_ok =
          dot(new_g, direction) >= params.wolfe_c2 * dg ? ys : 0.0;
      if (curvature_ok > 1e-12) {
        pair.rho = 1.0 / ys;
        memory.push_back(std::move(pair));
        if (static_cast<int>(memory.size()) > params.history) {
          memory.pop_front();
        }
      }
    }

    x.swap(next);
    g.swap(new_g);
    fx = new_fx;
    report.iterations = iter;
    report.value = fx;
    report.gradient_norm = max_norm(g);
    if (monitor) monitor(iter, fx, report.gradient_norm);
    if (report.gradient_norm <= params.gradient_tolerance) {
      report.converged = true;
      break;
    }
  }
  return report;
}

}  // namespace

LbfgsReport lbfgs_minimize(std::vector<double>& x, const LbfgsObjective& f,
                           const LbfgsParams& params,
                           const LbfgsMonitor& monitor) {
  return minimize(x, f, params, monitor, /*use_memory=*/true);
}

LbfgsReport gradient_descent_minimize(std::vector<double>& x,
                                      const LbfgsObjective& f,
                                      const LbfgsParams& params,
                                      const LbfgsMonitor& monitor) {
  return minimize(x, f, params, monitor, /*use_memory=*/false);
}

}  // namespace morphtag::detail
