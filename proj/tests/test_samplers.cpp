#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bethedge/samplers.hpp"

using namespace bethedge;

TEST_CASE("main problem from parameter triplets") {
  ChoiceProblem even = main_problem(0.5, 0.5, 0.5);
  CHECK(even.safe == 1.0);
  REQUIRE(even.risky.size() == 2);
  CHECK(even.risky.outcomes()[0].value == 0.5);
  CHECK(even.risky.outcomes()[0].prob == 0.5);
  CHECK(even.risky.outcomes()[1].value == 2.0);
  CHECK(even.risky.outcomes()[1].prob == 0.5);

  ChoiceProblem wide = main_problem(0.5, 0.25, 0.25);
  CHECK(wide.risky.outcomes()[0].value == 0.25);
  CHECK(wide.risky.outcomes()[1].value == 4.0);

  CHECK_THROWS_AS(main_problem(0.0, 0.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(main_problem(0.5, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(main_problem(0.5, 0.5, -0.1), std::invalid_argument);
}

TEST_CASE("main draws straddle the safe value") {
  RandomStream stream(301, 0);
  for (int rep = 0; rep < 1000; ++rep) {
    ChoiceProblem p = sample_main(stream);
    CHECK(p.safe == 1.0);
    CHECK(p.risky.min_value() < 1.0);
    CHECK(p.risky.max_value() > 1.0);
  }
}

TEST_CASE("random streams are deterministic and open-interval") {
  RandomStream a(77, 5), b(77, 5), c(77, 6);
  bool all_equal = true, any_diff = false;
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 100'000; ++i) {
    double x = a.next_open01(), y = b.next_open01(), z = c.next_open01();
    all_equal = all_equal && (x == y);
    any_diff = any_diff || (x != z);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  CHECK(all_equal);
  CHECK(any_diff);
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
}

TEST_CASE("prescribed-mean lottery reproduces the worked example") {
  auto p = gm_ratio_problem(0.5, 1.0, 2.125);
  REQUIRE(p.has_value());
  CHECK(p->risky.outcomes()[0].value == Catch::Approx(0.25).margin(1e-9));
  CHECK(p->risky.outcomes()[1].value == Catch::Approx(4.0).margin(1e-8));
  CHECK(p->safe == 1.0);
}

TEST_CASE("prescribed-mean lottery hits both means") {
  RandomStream stream(302, 0);
  for (int rep = 0; rep < 2000; ++rep) {
    double prob = stream.next_open01();
    double gm = stream.next_open01();
    double e = 1.0 / stream.next_open01();
    auto p = gm_ratio_problem(prob, gm, e);
    if (!p) continue;
    CHECK(std::abs(geometric_mean(p->risky) - gm) <= 1e-9 * gm);
    CHECK(std::abs(arithmetic_mean(p->risky) - e) <= 1e-9 * e);
    CHECK(p->risky.outcomes().back().prob == Catch::Approx(prob).margin(1e-12));
  }
}

TEST_CASE("prescribed-mean lottery rejects impossible pairs") {
  CHECK(gm_ratio_problem(0.5, 2.0, 1.0) == std::nullopt);   // GM above E
  CHECK(gm_ratio_problem(0.5, 1.0, 1.0) == std::nullopt);   // GM equal to E
  CHECK_THROWS_AS(gm_ratio_problem(0.0, 1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(gm_ratio_problem(0.5, -1.0, 2.0), std::invalid_argument);
  // A geometric mean this far below the arithmetic mean needs a low outcome
  // smaller than any positive double.
  CHECK(gm_ratio_problem(0.999999, 1e-300, 1.0000001) == std::nullopt);
}

TEST_CASE("gm-ratio sampling honors the prescribed-mean contract") {
  RandomStream stream(303, 0);
  for (int rep = 0; rep < 2000; ++rep) {
    ChoiceProblem p = sample_gm_ratio(stream);
    CHECK(p.safe == 1.0);
    double gm = geometric_mean(p.risky);
    double e = arithmetic_mean(p.risky);
    CHECK(gm < 1.0);
    CHECK(e > 1.0);
    CHECK(p.risky.size() == 2);
  }
}

TEST_CASE("band membership") {
  Band gme{BandKind::GmMuE, 0, 0};
  CHECK(band_holds(gme, 0.9, 1.5, 1.0));
  CHECK_FALSE(band_holds(gme, 1.1, 1.5, 1.0));
  CHECK_FALSE(band_holds(gme, 0.8, 0.95, 1.0));

  Band low_half{BandKind::Fraction, 2, 1};
  Band high_half{BandKind::Fraction, 2, 2};
  // ratio (mu - gm)/(e - gm) = 0.25 with gm = 0.8, e = 1.6, mu = 1.
  CHECK(band_holds(low_half, 0.8, 1.6, 1.0));
  CHECK_FALSE(band_holds(high_half, 0.8, 1.6, 1.0));
  // ratio 0.75
  CHECK(band_holds(high_half, 0.4, 1.2, 1.0));
  CHECK_FALSE(band_holds(low_half, 0.4, 1.2, 1.0));
  // the shared edge ratio = 1/2 belongs to both closed bands
  CHECK(band_holds(low_half, 0.5, 1.5, 1.0));
  CHECK(band_holds(high_half, 0.5, 1.5, 1.0));
}

TEST_CASE("conditioned draws satisfy their band") {
  RootConfig cfg;
  for (int k = 2; k <= 5; ++k) {
    for (int i = 1; i <= k; ++i) {
      ScenarioSampler s =
          ScenarioSampler::conditioned(BaseSampler::Main, {BandKind::Fraction, k, i}, 99);
      RandomStream stream(s.seed, static_cast<std::uint64_t>(k * 10 + i));
      for (int rep = 0; rep < 50; ++rep) {
        ChoiceProblem p = sample_scenario(s, stream, cfg);
        CHECK(band_holds(s.band, geometric_mean(p.risky), arithmetic_mean(p.risky), p.safe));
      }
    }
  }
  ScenarioSampler gme = ScenarioSampler::conditioned(BaseSampler::Main, {BandKind::GmMuE, 0, 0}, 99);
  RandomStream stream(gme.seed, 0);
  for (int rep = 0; rep < 200; ++rep) {
    ChoiceProblem p = sample_scenario(gme, stream, cfg);
    CHECK(geometric_mean(p.risky) < 1.0);
    CHECK(arithmetic_mean(p.risky) > 1.0);
  }
}

TEST_CASE("conditioning can also wrap the gm-ratio base") {
  ScenarioSampler s =
      ScenarioSampler::conditioned(BaseSampler::GMRatio, {BandKind::Fraction, 5, 5}, 7);
  RandomStream stream(s.seed, 0);
  for (int rep = 0; rep < 50; ++rep) {
    ChoiceProblem p = sample_scenario(s, stream);
    CHECK(band_holds(s.band, geometric_mean(p.risky), arithmetic_mean(p.risky), p.safe));
  }
}

TEST_CASE("an exhausted rejection budget raises") {
  // A budget of one exhausts exactly when the first candidate misses the
  // band, so locate a stream whose first draw misses before asserting.
  ScenarioSampler s =
      ScenarioSampler::conditioned(BaseSampler::Main, {BandKind::Fraction, 5, 5}, 4);
  std::uint64_t miss_stream = 0;
  bool found = false;
  for (std::uint64_t i = 0; i < 64 && !found; ++i) {
    RandomStream probe(s.seed, i);
    ChoiceProblem first = sample_main(probe);
    if (!band_holds(s.band, geometric_mean(first.risky), arithmetic_mean(first.risky),
                    first.safe)) {
      miss_stream = i;
      found = true;
    }
  }
  REQUIRE(found);
  RandomStream stream(s.seed, miss_stream);
  CHECK_THROWS_AS(sample_scenario(s, stream, RootConfig{}, 1), RejectionBudgetExceeded);
}

TEST_CASE("sampler validation and tokens") {
  CHECK_THROWS_AS(
      validate_sampler(ScenarioSampler::conditioned(BaseSampler::Main, {BandKind::Fraction, 7, 1}, 0)),
      std::invalid_argument);
  CHECK_THROWS_AS(
      validate_sampler(ScenarioSampler::conditioned(BaseSampler::Main, {BandKind::Fraction, 3, 4}, 0)),
      std::invalid_argument);

  CHECK(format_sampler_token(ScenarioSampler::main(0)) == "main");
  CHECK(format_sampler_token(ScenarioSampler::gm_ratio(0)) == "gm-ratio");
  ScenarioSampler cond =
      ScenarioSampler::conditioned(BaseSampler::GMRatio, {BandKind::Fraction, 3, 2}, 12);
  CHECK(format_sampler_token(cond) == "cond:3,2");
  ScenarioSampler parsed = parse_sampler_token("cond:3,2", BaseSampler::GMRatio, 12);
  CHECK(parsed == cond);
  ScenarioSampler gme = parse_sampler_token("cond:gm-mu-e", BaseSampler::Main, 3);
  CHECK(gme.band.kind == BandKind::GmMuE);
  CHECK(format_sampler_token(gme) == "cond:gm-mu-e");
  CHECK(parse_sampler_token("main", BaseSampler::Main, 5).kind == ScenarioSampler::Kind::Main);
  CHECK_THROWS_AS(parse_sampler_token("bogus", BaseSampler::Main, 0), std::invalid_argument);
  CHECK_THROWS_AS(parse_sampler_token("cond:9,1", BaseSampler::Main, 0), std::invalid_argument);
  CHECK_THROWS_AS(parse_base_token("x"), std::invalid_argument);
  CHECK(parse_base_token("gm-ratio") == BaseSampler::GMRatio);
}
