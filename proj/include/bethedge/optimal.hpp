#pragma once

// The optimal risky share alpha*, the induced distribution of optimal safe
// values, and certainty equivalents of quantile agents.

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bethedge/lottery.hpp"
#include "bethedge/root_finding.hpp"

namespace bethedge {

enum class Boundary { AllSafe, AllRisky, Interior };

inline const char* to_string(Boundary b) {
  switch (b) {
    case Boundary::AllSafe: return "AllSafe";
    case Boundary::AllRisky: return "AllRisky";
    default: return "Interior";
  }
}

struct OptimalShareResult {
  double alpha_star = 0.0;
  Boundary boundary = Boundary::AllSafe;
  double growth_at_optimum = 0.0;
};

struct DegenerateLottery : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Interior roots are searched on [inset, 1 - inset].
inline constexpr double kInteriorBracketInset = 1e-15;

namespace detail {

// Stationarity residual of ln GR, with the trivial zero of the harmonic-mean
// form divided out:  E[v/(1+x v)] / E[1/(1+x v)]  where v_i = y_i/mu - 1.
// Shares its roots on (0,1] with HM[1 + x(y/mu - 1)] = 1, tends to
// E[y]/mu - 1 as x -> 0, and never cancels to an exact machine zero away
// from the true root.
inline double share_residual(const Lottery& y, double mu, double x) {
  double num = 0.0, den = 0.0;
  for (const Outcome& o : y.outcomes()) {
    double v = o.value / mu - 1.0;
    double w = 1.0 + x * v;
    num += o.prob * v / w;
    den += o.prob / w;
  }
  return num / den;
}

// First-order condition E[v/(1+x v)] and its derivative -E[(v/(1+x v))^2],
// used for a short Newton polish after bracketing.
inline void share_foc(const Lottery& y, double mu, double x, double& foc, double& slope) {
  foc = 0.0;
  slope = 0.0;
  for (const Outcome& o : y.outcomes()) {
    double v = o.value / mu - 1.0;
    double t = v / (1.0 + x * v);
    foc += o.prob * t;
    slope -= o.prob * t * t;
  }
}

}  // namespace detail

// Share of the population sent to the risky alternative that maximizes the
// long-run growth rate. Boundary cases are decided exactly from the means:
// E[y] <= mu pins alpha* = 0 and HM[y] >= mu pins alpha* = 1; a lottery
// degenerate at mu resolves to the safe boundary.
inline OptimalShareResult optimal_share(const ChoiceProblem& p, const RootConfig& cfg = {}) {
  const Lottery& y = p.risky;
  const double mu = p.safe;
  if (arithmetic_mean(y) <= mu)
    return {0.0, Boundary::AllSafe, growth_rate(0.0, p)};
  if (harmonic_mean(y) >= mu)
    return {1.0, Boundary::AllRisky, growth_rate(1.0, p)};

  auto residual = [&](double x) { return detail::share_residual(y, mu, x); };
  double x = solve_bracketed(residual, kInteriorBracketInset, 1.0 - kInteriorBracketInset, cfg);

  // Newton steps on the raw first-order condition sharpen the bracketed
  // root to full precision; keep a step only if it shrinks the residual.
  double foc, slope;
  detail::share_foc(y, mu, x, foc, slope);
  for (int k = 0; k < 3 && slope != 0.0; ++k) {
    double xn = x - foc / slope;
    if (!(xn > 0.0) || !(xn < 1.0)) break;
    double fn, sn;
    detail::share_foc(y, mu, xn, fn, sn);
    if (!(std::abs(fn) < std::abs(foc))) break;
    x = xn;
    foc = fn;
    slope = sn;
  }
  return {x, Boundary::Interior, growth_rate(x, p)};
}

// Fraction of the population optimally kept safe when the safe value is x:
// 1 - alpha*(y, x). As a function of x this is a CDF supported on
// [HM[y], E[y]].
inline double optimal_cdf(const Lottery& y, double x, const RootConfig& cfg = {}) {
  if (y.is_degenerate())
    throw DegenerateLottery("optimal_cdf: lottery is degenerate");
  if (!std::isfinite(x) || x <= 0.0)
    throw std::invalid_argument("optimal_cdf: safe value must be finite and > 0");
  return 1.0 - optimal_share(ChoiceProblem(y, x), cfg).alpha_star;
}

namespace detail {

// Certainty equivalent of the agent at population quantile a: the root in x
// of HM[a + (1-a) y / x] = 1. The residual is evaluated in the
// cancellation-free form (1-a)/x * E[(y-x)/w] / E[1/w] with
// w_i = a + (1-a) y_i / x, which is strictly decreasing on (0, E[y]].
inline double quantile_ce_root(const Lottery& y, double a, const RootConfig& cfg) {
  const double hm = harmonic_mean(y);
  const double em = arithmetic_mean(y);
  double lo = hm > 0.0 ? hm : std::numeric_limits<double>::min();

  auto residual = [&](double x) {
    double s = 0.0, num = 0.0;
    for (const Outcome& o : y.outcomes()) {
      double w = a + (1.0 - a) * o.value / x;
      s += o.prob / w;
      num += o.prob * (o.value - x) / w;
    }
    return (1.0 - a) / x * num / s;
  };
  double x = solve_bracketed(residual, lo, em, cfg);

  // Newton polish on G(x) = 1/S(x) - 1 with S(x) = E[1/w]:
  // G' = -S'/S^2 and S' = (1-a)/x^2 * E[y/w^2].
  double g = residual(x);
  for (int k = 0; k < 3; ++k) {
    double s = 0.0, sp = 0.0;
    for (const Outcome& o : y.outcomes()) {
      double w = a + (1.0 - a) * o.value / x;
      s += o.prob / w;
      sp += o.prob * o.value / (w * w);
    }
    sp *= (1.0 - a) / (x * x);
    double gp = -sp / (s * s);
    if (gp == 0.0) break;
    double xn = x - g / gp;
    if (!(xn >= lo) || !(xn <= em)) break;
    double gn = residual(xn);
    if (!(std::abs(gn) < std::abs(g))) break;
    x = xn;
    g = gn;
  }
  return x;
}

}  // namespace detail

// Certainty equivalent of the agent at quantile a of the optimal preference
// distribution: a = 0 gives the harmonic mean, a = 1 the arithmetic mean,
// interior a the root of HM[a + (1-a) y / x] = 1. Strictly increasing in a
// for nondegenerate lotteries.
inline double agent_ce(double a, const Lottery& y, const RootConfig& cfg = {}) {
  if (!std::isfinite(a) || a < 0.0 || a > 1.0)
    throw std::invalid_argument("agent_ce: quantile must lie in [0,1]");
  if (y.is_degenerate()) return y.outcomes().front().value;
  if (a == 0.0) return harmonic_mean(y);
  if (a == 1.0) return arithmetic_mean(y);
  return detail::quantile_ce_root(y, a, cfg);
}

// Safe value x at which the optimal CDF equals lam, i.e. the lam-quantile of
// the optimal safe-value distribution. Requires lam in (0,1).
inline double lambda_median(const Lottery& y, double lam, const RootConfig& cfg = {}) {
  if (y.is_degenerate())
    throw DegenerateLottery("lambda_median: lottery is degenerate");
  if (!std::isfinite(lam) || lam <= 0.0 || lam >= 1.0)
    throw std::invalid_argument("lambda_median: quantile must lie in (0,1)");
  return detail::quantile_ce_root(y, lam, cfg);
}

// Certainty equivalent of the median agent (a = 1/2).
inline double median_agent_ce(const Lottery& y, const RootConfig& cfg = {}) {
  return agent_ce(0.5, y, cfg);
}

}  // namespace bethedge
