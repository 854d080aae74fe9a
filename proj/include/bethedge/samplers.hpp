#pragma once

// Random choice-problem generators for the Monte Carlo comparison: the main
// binary-lottery sampler, a sampler that prescribes the geometric-mean ratio
// directly, and rejection-conditioned variants of either.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bethedge/lottery.hpp"
#include "bethedge/rng.hpp"
#include "bethedge/root_finding.hpp"

namespace bethedge {

enum class BaseSampler { Main, GMRatio };

enum class BandKind {
  // Condition on (E - GM)/(E - GM + GM - ...) falling in a sub-interval:
  // concretely (1 - GM)/(E - GM) in [(i-1)/k, i/k] with the safe value 1.
  Fraction,
  // Condition on GM < mu < E, the regime where hedging is strictly interior.
  GmMuE,
};

struct Band {
  BandKind kind = BandKind::GmMuE;
  int k = 0;  // Fraction only: number of equal sub-intervals, 2..5
  int i = 0;  // Fraction only: which sub-interval, 1..k
  friend bool operator==(const Band&, const Band&) = default;
};

struct ScenarioSampler {
  enum class Kind { Main, GMRatio, Conditioned };
  Kind kind = Kind::Main;
  BaseSampler base = BaseSampler::Main;  // Conditioned only
  Band band{};                           // Conditioned only
  std::uint64_t seed = 0;

  static ScenarioSampler main(std::uint64_t seed) { return {Kind::Main, BaseSampler::Main, {}, seed}; }
  static ScenarioSampler gm_ratio(std::uint64_t seed) {
    return {Kind::GMRatio, BaseSampler::Main, {}, seed};
  }
  static ScenarioSampler conditioned(BaseSampler base, Band band, std::uint64_t seed) {
    return {Kind::Conditioned, base, band, seed};
  }

  friend bool operator==(const ScenarioSampler&, const ScenarioSampler&) = default;
};

struct RejectionBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kRejectionBudget = 1'000'000;

inline void validate_sampler(const ScenarioSampler& s) {
  if (s.kind == ScenarioSampler::Kind::Conditioned && s.band.kind == BandKind::Fraction) {
    if (s.band.k < 2 || s.band.k > 5 || s.band.i < 1 || s.band.i > s.band.k)
      throw std::invalid_argument("ScenarioSampler: band requires k in 2..5 and i in 1..k");
  }
}

// Binary lottery from three uniforms: with probability p the payoff is 1/r,
// with probability 1-p it is q, against the safe value 1. Always straddles
// the safe value: q < 1 < 1/r.
inline ChoiceProblem main_problem(double p, double q, double r) {
  if (!(p > 0.0) || !(p < 1.0) || !(q > 0.0) || !(q < 1.0) || !(r > 0.0) || !(r < 1.0))
    throw std::invalid_argument("main_problem: parameters must lie in (0,1)");
  return ChoiceProblem(Lottery({{q, 1.0 - p}, {1.0 / r, p}}), 1.0);
}

// Draw order is part of the determinism contract: p, then q, then r.
inline ChoiceProblem sample_main(RandomStream& stream) {
  double p = stream.next_open01();
  double q = stream.next_open01();
  double r = stream.next_open01();
  return main_problem(p, q, r);
}

// Binary lottery with prescribed geometric mean gm and arithmetic mean e
// (gm < e), top-outcome probability p, safe value 1. Solves for the low
// outcome l = e*exp(s) via the strictly increasing log-mean residual in
// s = ln(l/e); the high outcome h = e*(1 + (1-p)(1-e^s)/p) then matches the
// arithmetic mean identically. Returns nullopt when no binary lottery with
// positive double outcomes achieves the pair (gm so far below e that l
// underflows), or when gm >= e.
inline std::optional<ChoiceProblem> gm_ratio_problem(double p, double gm, double e,
                                                     const RootConfig& cfg = {}) {
  if (!(p > 0.0) || !(p < 1.0))
    throw std::invalid_argument("gm_ratio_problem: probability must lie in (0,1)");
  if (!std::isfinite(gm) || !std::isfinite(e) || gm <= 0.0 || e <= 0.0)
    throw std::invalid_argument("gm_ratio_problem: means must be finite and > 0");
  if (gm >= e) return std::nullopt;

  const double target = std::log(gm);
  auto residual = [&](double s) {
    double t = -std::expm1(s);  // 1 - l/e in [0, 1)
    return std::log(e) + p * std::log1p(t * (1.0 - p) / p) + (1.0 - p) * s - target;
  };
  constexpr double kDeepestLogRatio = -700.0;
  if (residual(kDeepestLogRatio) > 0.0) return std::nullopt;
  double s = solve_bracketed(residual, kDeepestLogRatio, 0.0, cfg);

  double l = e * std::exp(s);
  double h = e * (1.0 - std::expm1(s) * (1.0 - p) / p);
  if (!(l > 0.0) || !std::isfinite(h) || !(h > l)) return std::nullopt;
  return ChoiceProblem(Lottery({{l, 1.0 - p}, {h, p}}), 1.0);
}

// Draws (p, gm, e) = (u1, u2, 1/u3) and redraws until the pair is feasible.
// Draw order: p, then gm, then the reciprocal-mean uniform.
inline ChoiceProblem sample_gm_ratio(RandomStream& stream, const RootConfig& cfg = {},
                                     std::uint64_t budget = kRejectionBudget) {
  for (std::uint64_t tries = 0; tries < budget; ++tries) {
    double p = stream.next_open01();
    double gm = stream.next_open01();
    double e = 1.0 / stream.next_open01();
    if (auto problem = gm_ratio_problem(p, gm, e, cfg)) return std::move(*problem);
  }
  throw RejectionBudgetExceeded("sample_gm_ratio: no feasible draw within budget");
}

inline bool band_holds(const Band& band, double gm, double e, double mu) {
  switch (band.kind) {
    case BandKind::GmMuE:
      return gm < mu && mu < e;
    case BandKind::Fraction: {
      if (!(gm < mu) || !(e > gm)) return false;
      double ratio = (mu - gm) / (e - gm);
      double k = static_cast<double>(band.k);
      return ratio >= (band.i - 1) / k && ratio <= band.i / k;
    }
  }
  return false;
}

// One draw from the sampler, honoring the conditioning band by rejection.
// Throws RejectionBudgetExceeded after `budget` consecutive rejections.
inline ChoiceProblem sample_scenario(const ScenarioSampler& sampler, RandomStream& stream,
                                     const RootConfig& cfg = {},
                                     std::uint64_t budget = kRejectionBudget) {
  validate_sampler(sampler);
  switch (sampler.kind) {
    case ScenarioSampler::Kind::Main:
      return sample_main(stream);
    case ScenarioSampler::Kind::GMRatio:
      return sample_gm_ratio(stream, cfg, budget);
    case ScenarioSampler::Kind::Conditioned: {
      for (std::uint64_t tries = 0; tries < budget; ++tries) {
        ChoiceProblem p = sampler.base == BaseSampler::Main ? sample_main(stream)
                                                            : sample_gm_ratio(stream, cfg, budget);
        if (band_holds(sampler.band, geometric_mean(p.risky), arithmetic_mean(p.risky), p.safe))
          return p;
      }
      throw RejectionBudgetExceeded("sample_scenario: band missed for the whole budget");
    }
  }
  throw std::logic_error("sample_scenario: unknown sampler kind");
}

// Sampler tokens: `main`, `gm-ratio`, `cond:<k>,<i>`, `cond:gm-mu-e`.
// The conditioned base sampler travels separately (see base tokens below).
inline std::string format_sampler_token(const ScenarioSampler& s) {
  switch (s.kind) {
    case ScenarioSampler::Kind::Main: return "main";
    case ScenarioSampler::Kind::GMRatio: return "gm-ratio";
    case ScenarioSampler::Kind::Conditioned:
      if (s.band.kind == BandKind::GmMuE) return "cond:gm-mu-e";
      return "cond:" + std::to_string(s.band.k) + "," + std::to_string(s.band.i);
  }
  throw std::logic_error("format_sampler_token: unknown sampler kind");
}

inline std::string format_base_token(BaseSampler base) {
  return base == BaseSampler::Main ? "main" : "gm-ratio";
}

inline BaseSampler parse_base_token(std::string_view text) {
  if (text == "main") return BaseSampler::Main;
  if (text == "gm-ratio") return BaseSampler::GMRatio;
  throw std::invalid_argument("parse_base_token: expected 'main' or 'gm-ratio'");
}

inline ScenarioSampler parse_sampler_token(std::string_view text, BaseSampler base,
                                           std::uint64_t seed) {
  if (text == "main") return ScenarioSampler::main(seed);
  if (text == "gm-ratio") return ScenarioSampler::gm_ratio(seed);
  constexpr std::string_view kCond = "cond:";
  if (text.substr(0, kCond.size()) == kCond) {
    std::string_view rest = text.substr(kCond.size());
    if (rest == "gm-mu-e")
      return ScenarioSampler::conditioned(base, {BandKind::GmMuE, 0, 0}, seed);
    std::size_t comma = rest.find(',');
    if (comma == std::string_view::npos)
      throw std::invalid_argument("parse_sampler_token: expected 'cond:<k>,<i>' or 'cond:gm-mu-e'");
    Band band{BandKind::Fraction,
              static_cast<int>(detail::parse_double(rest.substr(0, comma), "parse_sampler_token")),
              static_cast<int>(detail::parse_double(rest.substr(comma + 1), "parse_sampler_token"))};
    ScenarioSampler s = ScenarioSampler::conditioned(base, band, seed);
    validate_sampler(s);
    return s;
  }
  throw std::invalid_argument("parse_sampler_token: unknown sampler '" + std::string(text) + "'");
}

}  // namespace bethedge
