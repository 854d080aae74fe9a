#pragma once

// Bracketed scalar root finding (Brent's method with inverse quadratic
// interpolation). Every iterate stays inside the caller's bracket.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bethedge {

struct RootConfig {
  double abs_tol_x = 1e-12;
  double abs_tol_f = 1e-12;
  int max_iter = 200;
};

struct NoSignChange : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MaxIterExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finds x in [lo, hi] with f(x) ~ 0. Preconditions: lo < hi and either f
// changes sign over the bracket, f vanishes at an endpoint, or an endpoint
// already satisfies |f| <= abs_tol_f (returned directly; this keeps limits
// whose residual is quadratically small at the boundary exact). Terminates
// when |f| <= abs_tol_f or the bracket width falls below abs_tol_x.
template <typename F>
double solve_bracketed(F&& f, double lo, double hi, const RootConfig& cfg = {}) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw std::invalid_argument("solve_bracketed: need finite lo < hi");
  if (!(cfg.abs_tol_x > 0.0) || !(cfg.abs_tol_f > 0.0) || cfg.max_iter < 1)
    throw std::invalid_argument("solve_bracketed: invalid tolerances");

  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (std::abs(fa) <= cfg.abs_tol_f && std::abs(fa) <= std::abs(fb)) return a;
  if (std::abs(fb) <= cfg.abs_tol_f) return b;
  if ((fa > 0.0) == (fb > 0.0))
    throw NoSignChange("solve_bracketed: f(" + std::to_string(lo) + ") and f(" +
                       std::to_string(hi) + ") have the same sign");

  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * cfg.abs_tol_x;
    double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0 || std::abs(fb) <= cfg.abs_tol_f) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // Inverse quadratic interpolation, or secant when only two points
      // are distinct; fall back to bisection if the step leaves the bracket.
      double s = fb / fa, p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        double qq = fa / fc, r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : std::copysign(tol1, xm);
    fb = f(b);
  }
  throw MaxIterExceeded("solve_bracketed: no convergence after " +
                        std::to_string(cfg.max_iter) + " iterations");
}

}  // namespace bethedge
