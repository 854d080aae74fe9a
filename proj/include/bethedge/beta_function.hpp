#pragma once

// Regularized incomplete beta function I_x(a, b), the CDF of the Beta(a, b)
// distribution, via a modified Lentz continued fraction.

#include <cmath>
#include <stdexcept>

namespace bethedge {

struct BetaParams {
  double a = 1.0;
  double b = 1.0;
  friend bool operator==(const BetaParams&, const BetaParams&) = default;
};

namespace detail {

// Continued fraction for the incomplete beta integral (modified Lentz).
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxTerms = 300;
  constexpr double kEps = 1e-14;
  constexpr double kTiny = 1e-300;

  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxTerms; ++m) {
    double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("beta_cdf: continued fraction did not converge");
}

}  // namespace detail

// I_x(a, b) for a, b > 0 and x clamped to [0, 1]. The continued fraction is
// evaluated on whichever tail converges fast and reflected via
// I_x(a, b) = 1 - I_{1-x}(b, a) otherwise.
inline double beta_cdf(double x, const BetaParams& params) {
  double a = params.a, b = params.b;
  if (!std::isfinite(a) || !std::isfinite(b) || a <= 0.0 || b <= 0.0)
    throw std::invalid_argument("beta_cdf: shape parameters must be finite and > 0");
  if (std::isnan(x)) throw std::invalid_argument("beta_cdf: x is NaN");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;

  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                    a * std::log(x) + b * std::log1p(-x);
  if (x < (a + 1.0) / (a + b + 2.0))
    return std::exp(ln_front) * detail::beta_continued_fraction(a, b, x) / a;
  return 1.0 - std::exp(ln_front) * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

}  // namespace bethedge
