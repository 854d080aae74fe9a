#pragma once

// Compensated (Neumaier) summation. Adding values in a fixed order yields a
// bit-reproducible total with error independent of the number of terms.

#include <cmath>

namespace bethedge {

struct CompensatedSum {
  double sum = 0.0;
  double compensation = 0.0;

  void add(double v) {
    double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      compensation += (sum - t) + v;
    else
      compensation += (v - t) + sum;
    sum = t;
  }

  double value() const { return sum + compensation; }
};

}  // namespace bethedge
