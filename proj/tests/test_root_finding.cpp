#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bethedge/root_finding.hpp"

using namespace bethedge;

TEST_CASE("solves simple bracketed roots") {
  CHECK(solve_bracketed([](double x) { return x - 1.0; }, 0.0, 2.0) ==
        Catch::Approx(1.0).margin(1e-12));
  CHECK(solve_bracketed([](double x) { return x * x - 2.0; }, 0.0, 2.0) ==
        Catch::Approx(std::sqrt(2.0)).margin(1e-12));
  CHECK(solve_bracketed([](double x) { return std::cos(x) - x; }, 0.0, 1.0) ==
        Catch::Approx(0.7390851332151607).margin(1e-11));
}

TEST_CASE("solves a descending bracket too") {
  CHECK(solve_bracketed([](double x) { return 2.0 - x * x; }, 0.0, 2.0) ==
        Catch::Approx(std::sqrt(2.0)).margin(1e-11));
}

TEST_CASE("stationarity residual of the worked example has its root at two thirds") {
  // E[v/(1+x v)] / E[1/(1+x v)] for y = {1: 1/2, 5: 1/2}, mu = 2. The raw
  // harmonic-mean form of the same condition also vanishes at x = 0; this
  // rescaled form keeps only the economic root.
  auto residual = [](double x) {
    double num = 0.0, den = 0.0;
    for (double y : {1.0, 5.0}) {
      double v = y / 2.0 - 1.0;
      double w = 1.0 + x * v;
      num += 0.5 * v / w;
      den += 0.5 / w;
    }
    return num / den;
  };
  CHECK(solve_bracketed(residual, 0.0, 1.0) == Catch::Approx(2.0 / 3.0).margin(1e-12));
  CHECK(solve_bracketed(residual, 1e-15, 1.0 - 1e-15) ==
        Catch::Approx(2.0 / 3.0).margin(1e-12));
}

TEST_CASE("handles nasty derivatives near the root") {
  auto f = [](double x) { return std::cbrt(x - 1.5); };
  CHECK(solve_bracketed(f, 0.0, 2.0) == Catch::Approx(1.5).margin(1e-11));
}

TEST_CASE("returns an endpoint that is already a root") {
  CHECK(solve_bracketed([](double x) { return x; }, 0.0, 2.0) == 0.0);
  CHECK(solve_bracketed([](double x) { return x - 2.0; }, 0.0, 2.0) == 2.0);
}

TEST_CASE("returns an endpoint whose residual is below tolerance") {
  // Residuals can be quadratically small at a bracket limit; the solver
  // accepts such an endpoint instead of relying on its floating-point sign.
  CHECK(solve_bracketed([](double x) { return x - 1e-13; }, 0.0, 2.0) == 0.0);
  CHECK(solve_bracketed([](double x) { return x - 2.0 + 1e-13; }, 0.0, 2.0) == 2.0);
  CHECK(solve_bracketed([](double x) { return 1e-13 * (x + 1.0); }, 0.0, 1.0) == 0.0);
}

TEST_CASE("rejects brackets without a sign change") {
  CHECK_THROWS_AS(solve_bracketed([](double x) { return x * x + 1.0; }, 0.0, 2.0),
                  NoSignChange);
  CHECK_THROWS_AS(solve_bracketed([](double x) { return -x * x - 1.0; }, 0.0, 2.0),
                  NoSignChange);
}

TEST_CASE("gives up after the iteration cap") {
  RootConfig tight;
  tight.abs_tol_x = 1e-15;
  tight.abs_tol_f = 1e-300;
  tight.max_iter = 3;
  CHECK_THROWS_AS(solve_bracketed([](double x) { return std::cbrt(x - 0.7123); }, 0.0, 1.0, tight),
                  MaxIterExceeded);
}

TEST_CASE("validates bracket and configuration") {
  auto f = [](double x) { return x; };
  CHECK_THROWS_AS(solve_bracketed(f, 2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_bracketed(f, 1.0, 1.0), std::invalid_argument);
  RootConfig bad;
  bad.abs_tol_x = 0.0;
  CHECK_THROWS_AS(solve_bracketed(f, 0.0, 1.0, bad), std::invalid_argument);
  RootConfig bad2;
  bad2.max_iter = 0;
  CHECK_THROWS_AS(solve_bracketed(f, 0.0, 1.0, bad2), std::invalid_argument);
}

TEST_CASE("iterates stay inside the bracket") {
  double lo = 0.1, hi = 3.0;
  auto f = [&](double x) {
    CHECK(x >= lo);
    CHECK(x <= hi);
    return std::log(x);  // root at 1
  };
  CHECK(solve_bracketed(f, lo, hi) == Catch::Approx(1.0).margin(1e-12));
}
