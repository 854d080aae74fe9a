#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bethedge/accumulate.hpp"
#include "bethedge/simulate.hpp"

using namespace bethedge;

namespace {

SimulationConfig small_config(std::uint64_t generations, std::uint64_t seed) {
  SimulationConfig cfg;
  cfg.generations = generations;
  cfg.sampler = ScenarioSampler::main(seed);
  cfg.specs = default_specs();
  return cfg;
}

}  // namespace

TEST_CASE("compensated sums cancel accumulation error") {
  CompensatedSum kahan;
  double naive = 0.0;
  for (int i = 0; i < 10'000'000; ++i) {
    kahan.add(0.1);
    naive += 0.1;
  }
  CHECK(std::abs(kahan.value() - 1e6) <= 1e-8);
  CHECK(std::abs(naive - 1e6) > std::abs(kahan.value() - 1e6));

  CompensatedSum mixed;
  mixed.add(1e16);
  mixed.add(1.0);
  mixed.add(-1e16);
  CHECK(mixed.value() == 1.0);
}

TEST_CASE("config validation") {
  SimulationConfig empty = small_config(100, 0);
  empty.specs.clear();
  CHECK_THROWS_AS(run_simulation(empty), std::invalid_argument);
  SimulationConfig none = small_config(0, 0);
  CHECK_THROWS_AS(run_simulation(none), std::invalid_argument);
  SimulationConfig bad_band = small_config(10, 0);
  bad_band.sampler = ScenarioSampler::conditioned(BaseSampler::Main, {BandKind::Fraction, 9, 1}, 0);
  CHECK_THROWS_AS(run_simulation(bad_band), std::invalid_argument);
}

TEST_CASE("a single generation is fully reproducible by hand") {
  SimulationConfig cfg = small_config(1, 2718);
  SimulationReport report = run_simulation(cfg);
  REQUIRE(report.rows.size() == cfg.specs.size());
  CHECK(report.generations == 1);
  CHECK(report.seed == 2718);

  RandomStream stream(2718, 0);
  ChoiceProblem p = sample_scenario(cfg.sampler, stream);
  double alpha = optimal_share(p).alpha_star;
  CHECK(report.rows[0].mean_alpha == alpha);
  CHECK(report.rows[0].relative_loss == 0.0);
  CHECK(report.gm_growth_optimal == std::exp(log_growth_rate(alpha, p)));
  for (std::size_t i = 0; i < cfg.specs.size(); ++i) {
    double share = risky_share(cfg.specs[i], p);
    CHECK(report.rows[i].mean_alpha == share);
    CHECK(report.rows[i].gm_growth == std::exp(log_growth_rate(share, p)));
  }
}

TEST_CASE("a small run matches a hand-rolled accumulation") {
  const std::uint64_t n = 257;
  SimulationConfig cfg = small_config(n, 99);
  SimulationReport report = run_simulation(cfg);

  std::vector<CompensatedSum> ln_growth(cfg.specs.size()), share(cfg.specs.size());
  CompensatedSum ln_opt;
  for (std::uint64_t g = 0; g < n; ++g) {
    RandomStream stream(99, g);
    ChoiceProblem p = sample_scenario(cfg.sampler, stream);
    double alpha = optimal_share(p).alpha_star;
    ln_opt.add(log_growth_rate(alpha, p));
    for (std::size_t i = 0; i < cfg.specs.size(); ++i) {
      double s = risky_share(cfg.specs[i], p);
      share[i].add(s);
      ln_growth[i].add(log_growth_rate(s, p));
    }
  }
  CHECK(report.gm_growth_optimal == std::exp(ln_opt.value() / static_cast<double>(n)));
  for (std::size_t i = 0; i < cfg.specs.size(); ++i) {
    CHECK(report.rows[i].mean_alpha == share[i].value() / static_cast<double>(n));
    CHECK(report.rows[i].gm_growth ==
          std::exp(ln_growth[i].value() / static_cast<double>(n)));
  }
}

TEST_CASE("reports are bit-identical across worker counts") {
  for (ScenarioSampler sampler :
       {ScenarioSampler::main(31), ScenarioSampler::gm_ratio(31),
        ScenarioSampler::conditioned(BaseSampler::Main, {BandKind::GmMuE, 0, 0}, 31)}) {
    SimulationConfig cfg = small_config(20'000, 31);
    cfg.sampler = sampler;
    cfg.workers = 1;
    SimulationReport one = run_simulation(cfg);
    cfg.workers = 8;
    SimulationReport eight = run_simulation(cfg);
    REQUIRE(one.rows.size() == eight.rows.size());
    CHECK(one.gm_growth_optimal == eight.gm_growth_optimal);
    for (std::size_t i = 0; i < one.rows.size(); ++i) {
      CHECK(one.rows[i].mean_alpha == eight.rows[i].mean_alpha);
      CHECK(one.rows[i].gm_growth == eight.rows[i].gm_growth);
      CHECK(one.rows[i].relative_loss == eight.rows[i].relative_loss);
    }
  }
}

TEST_CASE("the optimal rule never reports a loss") {
  SimulationReport report = run_simulation(small_config(10'000, 5));
  CHECK(report.rows[0].relative_loss == 0.0);
  CHECK(report.rows[0].gm_growth == report.gm_growth_optimal);
  for (const SpecResult& row : report.rows) CHECK(row.relative_loss >= 0.0);
}

TEST_CASE("extreme attitudes pin their aggregates exactly") {
  SimulationReport report = run_simulation(small_config(10'000, 6));
  // Every draw straddles the safe value 1, so the loving rule always goes
  // all-in and the averse rule always stays out; staying out grows at
  // exactly the safe rate.
  CHECK(report.rows[1].mean_alpha == 1.0);
  CHECK(report.rows[2].mean_alpha == 0.0);
  CHECK(report.rows[2].gm_growth == 1.0);
}

TEST_CASE("seeds shift the sampled universe") {
  SimulationReport a = run_simulation(small_config(2'000, 1));
  SimulationReport b = run_simulation(small_config(2'000, 2));
  CHECK(a.gm_growth_optimal != b.gm_growth_optimal);
  SimulationReport a2 = run_simulation(small_config(2'000, 1));
  CHECK(a.gm_growth_optimal == a2.gm_growth_optimal);
}

TEST_CASE("other samplers drive the engine too") {
  SimulationConfig cfg = small_config(5'000, 17);
  cfg.sampler = ScenarioSampler::gm_ratio(17);
  SimulationReport gm = run_simulation(cfg);
  CHECK(gm.rows[0].relative_loss == 0.0);
  for (const SpecResult& row : gm.rows) CHECK(row.relative_loss >= 0.0);

  cfg.sampler = ScenarioSampler::conditioned(BaseSampler::Main, {BandKind::Fraction, 3, 2}, 17);
  SimulationReport cond = run_simulation(cfg);
  CHECK(cond.rows[0].relative_loss == 0.0);
  for (const SpecResult& row : cond.rows) CHECK(row.relative_loss >= 0.0);
}
