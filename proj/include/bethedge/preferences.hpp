#pragma once

// Preference families compared in the Monte Carlo comparison: extreme risk
// attitudes, homogeneous CRRA populations, heterogeneous populations with
// Beta-distributed attitudes, and the growth-optimal benchmark.

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bethedge/beta_function.hpp"
#include "bethedge/lottery.hpp"
#include "bethedge/optimal.hpp"
#include "bethedge/root_finding.hpp"

namespace bethedge {

struct RelativeRiskCoefficient {
  double value = 0.0;
  friend bool operator==(const RelativeRiskCoefficient&, const RelativeRiskCoefficient&) = default;
};

enum class PreferenceKind {
  ExtremeRiskLoving,
  ExtremeRiskAverse,
  HomogeneousCRRA,
  HeterogeneousCRRA,
  HeterogeneousWeightedAverage,
  Optimal,
};

// One row of the comparison: a rule mapping each choice problem to the share
// of the population that picks the risky alternative.
struct PreferenceSpec {
  PreferenceKind kind = PreferenceKind::Optimal;
  RelativeRiskCoefficient rho{};  // HomogeneousCRRA only
  BetaParams beta{};              // heterogeneous kinds only

  static PreferenceSpec extreme_loving() { return {PreferenceKind::ExtremeRiskLoving, {}, {}}; }
  static PreferenceSpec extreme_averse() { return {PreferenceKind::ExtremeRiskAverse, {}, {}}; }
  static PreferenceSpec crra(double rho) {
    return {PreferenceKind::HomogeneousCRRA, {rho}, {}};
  }
  static PreferenceSpec het_crra(double a, double b) {
    return {PreferenceKind::HeterogeneousCRRA, {}, {a, b}};
  }
  static PreferenceSpec het_wavg(double a, double b) {
    return {PreferenceKind::HeterogeneousWeightedAverage, {}, {a, b}};
  }
  static PreferenceSpec optimal() { return {PreferenceKind::Optimal, {}, {}}; }

  friend bool operator==(const PreferenceSpec&, const PreferenceSpec&) = default;
};

// Certainty equivalent of a CRRA agent with coefficient rho:
// (E[y^(1-rho)])^(1/(1-rho)), continuous through rho = 1 where it equals the
// geometric mean. Computed as exp(log1p(E[expm1((1-rho) ln y)]) / (1-rho)),
// which stays accurate near the seam. For rho >= 1 a zero outcome drives the
// certainty equivalent to 0.
inline double crra_ce(double rho, const Lottery& y) {
  if (!std::isfinite(rho) || rho < 0.0)
    throw std::invalid_argument("crra_ce: coefficient must be finite and >= 0");
  if (y.is_degenerate()) return y.outcomes().front().value;
  double s = 1.0 - rho;
  if (s == 1.0) return arithmetic_mean(y);
  if (std::abs(s) <= 1e-12) return geometric_mean(y);
  if (s < 0.0 && y.min_value() == 0.0) return 0.0;
  if (s == -1.0) return harmonic_mean(y);
  double m = 0.0;
  for (const Outcome& o : y.outcomes())
    m += o.prob * std::expm1(s * std::log(o.value));
  return std::exp(std::log1p(m) / s);
}

// Certainty equivalent used by the weighted-average family: a convex
// combination beta*HM[y] + (1-beta)*E[y] of the two optimal-CDF endpoints.
inline double weighted_average_ce(double beta, const Lottery& y) {
  if (!std::isfinite(beta) || beta < 0.0 || beta > 1.0)
    throw std::invalid_argument("weighted_average_ce: weight must lie in [0,1]");
  return beta * harmonic_mean(y) + (1.0 - beta) * arithmetic_mean(y);
}

// Threshold coefficient rho* in [0, 2] at which a CRRA agent is indifferent:
// agents with rho < rho* strictly prefer the risky alternative. Boundary
// cases are decided from the endpoint certainty equivalents (E[y] at rho = 0,
// HM[y] at rho = 2).
inline double crra_threshold(const ChoiceProblem& p, const RootConfig& cfg = {}) {
  const double mu = p.safe;
  if (crra_ce(0.0, p.risky) <= mu) return 0.0;
  if (crra_ce(2.0, p.risky) >= mu) return 2.0;
  auto residual = [&](double r) { return crra_ce(r, p.risky) - mu; };
  return solve_bracketed(residual, 0.0, 2.0, cfg);
}

// Threshold weight beta* at which the weighted-average certainty equivalent
// crosses mu: (E[y] - mu) / (E[y] - HM[y]), clamped to [0, 1]. Agents with
// beta < beta* strictly prefer the risky alternative.
inline double wavg_threshold(const ChoiceProblem& p) {
  double hm = harmonic_mean(p.risky);
  double em = arithmetic_mean(p.risky);
  if (em == hm) return em > p.safe ? 1.0 : 0.0;
  double t = (em - p.safe) / (em - hm);
  return t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
}

// Share of the population choosing the risky alternative under one
// preference rule. Ties (certainty equivalent exactly mu) go to safe.
inline double risky_share(const PreferenceSpec& spec, const ChoiceProblem& p,
                          const RootConfig& cfg = {}) {
  switch (spec.kind) {
    case PreferenceKind::ExtremeRiskLoving:
      return p.risky.prob_above(p.safe) > 0.0 ? 1.0 : 0.0;
    case PreferenceKind::ExtremeRiskAverse:
      return p.risky.prob_below(p.safe) > 0.0 ? 0.0 : 1.0;
    case PreferenceKind::HomogeneousCRRA:
      return crra_ce(spec.rho.value, p.risky) > p.safe ? 1.0 : 0.0;
    case PreferenceKind::HeterogeneousCRRA:
      // Attitudes rho = 2*B with B ~ Beta(a, b); the mass below rho* picks risky.
      return beta_cdf(crra_threshold(p, cfg) / 2.0, spec.beta);
    case PreferenceKind::HeterogeneousWeightedAverage:
      return beta_cdf(wavg_threshold(p), spec.beta);
    case PreferenceKind::Optimal:
      return optimal_share(p, cfg).alpha_star;
  }
  throw std::logic_error("risky_share: unknown preference kind");
}

// Risky shares for a batch of rules on one problem, with the per-problem
// thresholds and the optimal share computed once. The optimal share is
// passed in so the caller can reuse it for the growth benchmark; entries
// match risky_share exactly.
inline std::vector<double> population_shares(const std::vector<PreferenceSpec>& specs,
                                             const ChoiceProblem& p, double alpha_star,
                                             const RootConfig& cfg = {}) {
  double crra_thr = -1.0, wavg_thr = -1.0;
  std::vector<double> shares(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const PreferenceSpec& spec = specs[i];
    switch (spec.kind) {
      case PreferenceKind::HeterogeneousCRRA:
        if (crra_thr < 0.0) crra_thr = crra_threshold(p, cfg);
        shares[i] = beta_cdf(crra_thr / 2.0, spec.beta);
        break;
      case PreferenceKind::HeterogeneousWeightedAverage:
        if (wavg_thr < 0.0) wavg_thr = wavg_threshold(p);
        shares[i] = beta_cdf(wavg_thr, spec.beta);
        break;
      case PreferenceKind::Optimal:
        shares[i] = alpha_star;
        break;
      default:
        shares[i] = risky_share(spec, p, cfg);
        break;
    }
  }
  return shares;
}

// True when the certainty equivalent is strictly decreasing across the
// ascending grid of coefficients (trivially true for degenerate lotteries).
inline bool crra_ce_monotone_check(const Lottery& y, const std::vector<double>& rho_grid) {
  for (std::size_t i = 1; i < rho_grid.size(); ++i)
    if (!(rho_grid[i - 1] < rho_grid[i]))
      throw std::invalid_argument("crra_ce_monotone_check: grid must be ascending");
  if (y.is_degenerate()) return true;
  for (std::size_t i = 1; i < rho_grid.size(); ++i)
    if (!(crra_ce(rho_grid[i], y) < crra_ce(rho_grid[i - 1], y))) return false;
  return true;
}

// Text forms: `extreme-loving`, `extreme-averse`, `crra:<rho>`,
// `het-crra:<a>,<b>`, `het-wavg:<a>,<b>`, `optimal`.
inline std::string format_preference(const PreferenceSpec& spec) {
  switch (spec.kind) {
    case PreferenceKind::ExtremeRiskLoving: return "extreme-loving";
    case PreferenceKind::ExtremeRiskAverse: return "extreme-averse";
    case PreferenceKind::HomogeneousCRRA: return "crra:" + detail::format_double(spec.rho.value);
    case PreferenceKind::HeterogeneousCRRA:
      return "het-crra:" + detail::format_double(spec.beta.a) + "," +
             detail::format_double(spec.beta.b);
    case PreferenceKind::HeterogeneousWeightedAverage:
      return "het-wavg:" + detail::format_double(spec.beta.a) + "," +
             detail::format_double(spec.beta.b);
    case PreferenceKind::Optimal: return "optimal";
  }
  throw std::logic_error("format_preference: unknown preference kind");
}

namespace detail {

inline BetaParams parse_beta_pair(std::string_view text, const char* what) {
  std::size_t comma = text.find(',');
  if (comma == std::string_view::npos)
    throw std::invalid_argument(std::string(what) + ": expected '<a>,<b>'");
  BetaParams params{parse_double(text.substr(0, comma), what),
                    parse_double(text.substr(comma + 1), what)};
  if (!std::isfinite(params.a) || !std::isfinite(params.b) || params.a <= 0.0 || params.b <= 0.0)
    throw std::invalid_argument(std::string(what) + ": shape parameters must be > 0");
  return params;
}

}  // namespace detail

inline PreferenceSpec parse_preference(std::string_view text) {
  if (text == "extreme-loving") return PreferenceSpec::extreme_loving();
  if (text == "extreme-averse") return PreferenceSpec::extreme_averse();
  if (text == "optimal") return PreferenceSpec::optimal();
  constexpr std::string_view kCrra = "crra:", kHetCrra = "het-crra:", kHetWavg = "het-wavg:";
  if (text.substr(0, kHetCrra.size()) == kHetCrra) {
    BetaParams b = detail::parse_beta_pair(text.substr(kHetCrra.size()), "parse_preference");
    return PreferenceSpec::het_crra(b.a, b.b);
  }
  if (text.substr(0, kHetWavg.size()) == kHetWavg) {
    BetaParams b = detail::parse_beta_pair(text.substr(kHetWavg.size()), "parse_preference");
    return PreferenceSpec::het_wavg(b.a, b.b);
  }
  if (text.substr(0, kCrra.size()) == kCrra) {
    double rho = detail::parse_double(text.substr(kCrra.size()), "parse_preference");
    if (!std::isfinite(rho) || rho < 0.0)
      throw std::invalid_argument("parse_preference: crra coefficient must be >= 0");
    return PreferenceSpec::crra(rho);
  }
  throw std::invalid_argument("parse_preference: unknown preference '" + std::string(text) + "'");
}

// The full comparison set, in reporting order: the optimal benchmark, the
// two extreme attitudes, three homogeneous CRRA populations, and the five
// Beta laws for each heterogeneous family.
inline std::vector<PreferenceSpec> default_specs() {
  return {
      PreferenceSpec::optimal(),
      PreferenceSpec::extreme_loving(),
      PreferenceSpec::extreme_averse(),
      PreferenceSpec::crra(0.0),
      PreferenceSpec::crra(1.0),
      PreferenceSpec::crra(2.0),
      PreferenceSpec::het_crra(1.0, 1.0),
      PreferenceSpec::het_crra(2.0, 2.0),
      PreferenceSpec::het_crra(0.5, 0.5),
      PreferenceSpec::het_crra(2.0, 4.0),
      PreferenceSpec::het_crra(4.0, 2.0),
      PreferenceSpec::het_wavg(1.0, 1.0),
      PreferenceSpec::het_wavg(2.0, 2.0),
      PreferenceSpec::het_wavg(0.5, 0.5),
      PreferenceSpec::het_wavg(2.0, 4.0),
      PreferenceSpec::het_wavg(4.0, 2.0),
  };
}

}  // namespace bethedge
