#pragma once

// Finite-support lotteries over nonnegative payoffs, their classical means,
// probability mixtures, and the growth-rate functional GR(alpha) used
// throughout the library.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bethedge {

namespace detail {

// Shortest decimal string that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, const char* what) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw std::invalid_argument(std::string(what) + ": cannot parse number '" +
                                std::string(text) + "'");
  return v;
}

}  // namespace detail

struct Outcome {
  double value = 0.0;
  double prob = 0.0;
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

// Probability drift tolerated at construction; anything worse is rejected.
inline constexpr double kProbSumTolerance = 1e-9;
// Sums this close to one are floating-point rounding, not drift; the
// probabilities are kept verbatim so that rebuilding a lottery from its own
// outcomes reproduces it bit for bit.
inline constexpr double kProbKeepTolerance = 1e-13;
// Outcome values closer than this (relatively) are merged into one atom.
inline constexpr double kValueMergeTolerance = 1e-12;

// Discrete lottery in canonical form: values strictly increasing, duplicate
// values merged, every probability positive, probabilities summing to one.
// Immutable after construction; safe to share across threads.
class Lottery {
 public:
  explicit Lottery(std::vector<Outcome> outcomes) : outcomes_(std::move(outcomes)) {
    if (outcomes_.empty()) throw std::invalid_argument("Lottery: no outcomes");
    for (const Outcome& o : outcomes_) {
      if (!std::isfinite(o.value) || o.value < 0.0)
        throw std::invalid_argument("Lottery: outcome values must be finite and >= 0");
      if (!std::isfinite(o.prob) || o.prob <= 0.0)
        throw std::invalid_argument("Lottery: probabilities must be finite and > 0");
    }
    std::sort(outcomes_.begin(), outcomes_.end(),
              [](const Outcome& a, const Outcome& b) { return a.value < b.value; });
    std::size_t kept = 0;
    for (std::size_t i = 1; i < outcomes_.size(); ++i) {
      Outcome& prev = outcomes_[kept];
      const Outcome& cur = outcomes_[i];
      if (cur.value - prev.value <= kValueMergeTolerance * std::max(prev.value, cur.value)) {
        prev.prob += cur.prob;
      } else {
        outcomes_[++kept] = cur;
      }
    }
    outcomes_.resize(kept + 1);
    double sum = 0.0;
    for (const Outcome& o : outcomes_) sum += o.prob;
    if (std::abs(sum - 1.0) > kProbSumTolerance)
      throw std::invalid_argument("Lottery: probabilities sum to " +
                                  detail::format_double(sum) + ", expected 1");
    if (std::abs(sum - 1.0) > kProbKeepTolerance)
      for (Outcome& o : outcomes_) o.prob /= sum;
  }

  static Lottery degenerate(double value) { return Lottery({{value, 1.0}}); }

  const std::vector<Outcome>& outcomes() const { return outcomes_; }
  std::size_t size() const { return outcomes_.size(); }
  bool is_degenerate() const { return outcomes_.size() == 1; }

  double min_value() const { return outcomes_.front().value; }
  double max_value() const { return outcomes_.back().value; }

  // Pr[y > t] and Pr[y < t], strict comparisons.
  double prob_above(double t) const {
    double s = 0.0;
    for (const Outcome& o : outcomes_)
      if (o.value > t) s += o.prob;
    return s;
  }
  double prob_below(double t) const {
    double s = 0.0;
    for (const Outcome& o : outcomes_)
      if (o.value < t) s += o.prob;
    return s;
  }

  friend bool operator==(const Lottery&, const Lottery&) = default;

 private:
  std::vector<Outcome> outcomes_;
};

// A risky lottery against a safe payoff mu > 0.
struct ChoiceProblem {
  Lottery risky;
  double safe;

  ChoiceProblem(Lottery r, double mu) : risky(std::move(r)), safe(mu) {
    if (!std::isfinite(mu) || mu <= 0.0)
      throw std::invalid_argument("ChoiceProblem: safe value must be finite and > 0");
  }
};

inline double arithmetic_mean(const Lottery& y) {
  double s = 0.0;
  for (const Outcome& o : y.outcomes()) s += o.prob * o.value;
  return s;
}

// Computed in log space; a zero outcome short-circuits to 0.
inline double geometric_mean(const Lottery& y) {
  if (y.is_degenerate()) return y.outcomes().front().value;
  double acc = 0.0;
  for (const Outcome& o : y.outcomes()) {
    if (o.value == 0.0) return 0.0;
    acc += o.prob * std::log(o.value);
  }
  return std::exp(acc);
}

// A zero outcome makes E[1/y] infinite; the harmonic mean is 0 by convention.
inline double harmonic_mean(const Lottery& y) {
  if (y.is_degenerate()) return y.outcomes().front().value;
  double s = 0.0;
  for (const Outcome& o : y.outcomes()) {
    if (o.value == 0.0) return 0.0;
    s += o.prob / o.value;
  }
  return 1.0 / s;
}

// Probability mixture lam*a + (1-lam)*b over the union of supports.
inline Lottery mix(double lam, const Lottery& a, const Lottery& b) {
  if (!std::isfinite(lam) || lam < 0.0 || lam > 1.0)
    throw std::invalid_argument("mix: weight must lie in [0,1]");
  std::vector<Outcome> combined;
  combined.reserve(a.size() + b.size());
  for (const Outcome& o : a.outcomes())
    if (lam * o.prob > 0.0) combined.push_back({o.value, lam * o.prob});
  for (const Outcome& o : b.outcomes())
    if ((1.0 - lam) * o.prob > 0.0) combined.push_back({o.value, (1.0 - lam) * o.prob});
  return Lottery(std::move(combined));
}

// Outcome-wise affine map alpha*y + (1-alpha)*mu; alpha=0 collapses the
// support to the single point mu.
inline Lottery scale_shift(const Lottery& y, double alpha, double mu) {
  if (!std::isfinite(alpha) || alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("scale_shift: alpha must lie in [0,1]");
  if (!std::isfinite(mu) || mu <= 0.0)
    throw std::invalid_argument("scale_shift: mu must be finite and > 0");
  std::vector<Outcome> mapped = y.outcomes();
  for (Outcome& o : mapped) o.value = alpha * o.value + (1.0 - alpha) * mu;
  return Lottery(std::move(mapped));
}

// Long-run growth rate of a population sending share alpha to the risky
// alternative: the geometric mean of alpha*y + (1-alpha)*mu.
inline double growth_rate(double alpha, const ChoiceProblem& p) {
  return geometric_mean(scale_shift(p.risky, alpha, p.safe));
}

// ln growth_rate without materializing the transformed lottery; the
// simulation engine accumulates these directly.
inline double log_growth_rate(double alpha, const ChoiceProblem& p) {
  double acc = 0.0;
  for (const Outcome& o : p.risky.outcomes()) {
    double w = alpha * o.value + (1.0 - alpha) * p.safe;
    if (w <= 0.0) return -std::numeric_limits<double>::infinity();
    acc += o.prob * std::log(w);
  }
  return acc;
}

// Text form `v1:p1,v2:p2,...`, e.g. `4:0.5,0.25:0.5`.
inline Lottery parse_lottery(std::string_view text) {
  std::vector<Outcome> outcomes;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string_view entry =
        text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    std::size_t colon = entry.find(':');
    if (colon == std::string_view::npos || colon + 1 >= entry.size())
      throw std::invalid_argument("parse_lottery: expected 'value:prob' in '" +
                                  std::string(entry) + "'");
    outcomes.push_back({detail::parse_double(entry.substr(0, colon), "parse_lottery"),
                        detail::parse_double(entry.substr(colon + 1), "parse_lottery")});
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return Lottery(std::move(outcomes));
}

inline std::string format_lottery(const Lottery& y) {
  std::string out;
  for (const Outcome& o : y.outcomes()) {
    if (!out.empty()) out += ',';
    out += detail::format_double(o.value);
    out += ':';
    out += detail::format_double(o.prob);
  }
  return out;
}

}  // namespace bethedge
