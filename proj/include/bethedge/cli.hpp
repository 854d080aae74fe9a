#pragma once

// Command-line front end. cli::run is the whole program; the binary's main
// just forwards argv, which lets the test suite drive every command
// in-process and check exit codes and output.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bethedge/lottery.hpp"
#include "bethedge/optimal.hpp"
#include "bethedge/preferences.hpp"
#include "bethedge/report_io.hpp"
#include "bethedge/samplers.hpp"
#include "bethedge/simulate.hpp"
#include "bethedge/version.hpp"

namespace bethedge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;  // self-check assertion failed
inline constexpr int kExitUsage = 2;        // bad flags or unparsable inputs
inline constexpr int kExitSolver = 3;       // root finding or sampling failed
inline constexpr int kExitIo = 4;           // output file could not be written

namespace detail_cli {

inline std::string fixed12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12f", v);
  return buf;
}

inline bool write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  out.flush();
  return static_cast<bool>(out);
}

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline ChoiceProblem parse_problem(const std::string& risky, double safe) {
  try {
    return ChoiceProblem(parse_lottery(risky), safe);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

}  // namespace detail_cli

inline int cmd_alpha_star(const std::string& risky, double safe, std::ostream& out,
                          std::ostream& err) {
  try {
    ChoiceProblem problem = detail_cli::parse_problem(risky, safe);
    OptimalShareResult r = optimal_share(problem);
    out << "alpha_star: " << detail_cli::fixed12(r.alpha_star) << "\n"
        << "boundary: " << to_string(r.boundary) << "\n"
        << "growth_rate: " << detail_cli::fixed12(r.growth_at_optimum) << "\n";
    return kExitOk;
  } catch (const detail_cli::UsageError& e) {
    err << "alpha-star: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "alpha-star: " << e.what() << "\n";
    return kExitSolver;
  }
}

inline int cmd_ce(double agent, const std::string& risky, std::ostream& out, std::ostream& err) {
  try {
    Lottery y = [&] {
      try {
        return parse_lottery(risky);
      } catch (const std::invalid_argument& e) {
        throw detail_cli::UsageError(e.what());
      }
    }();
    if (!std::isfinite(agent) || agent < 0.0 || agent > 1.0)
      throw detail_cli::UsageError("agent quantile must lie in [0,1]");
    out << "ce: " << detail_cli::fixed12(agent_ce(agent, y)) << "\n";
    return kExitOk;
  } catch (const detail_cli::UsageError& e) {
    err << "ce: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "ce: " << e.what() << "\n";
    return kExitSolver;
  }
}

struct SimulateOptions {
  std::uint64_t generations = 1'000'000;
  bool full_scale = false;   // switch to the full 10.7M-generation table
  std::uint64_t seed = 0;
  std::string sampler = "main";
  std::string cond_base = "main";
  std::vector<std::string> specs{"default15"};
  std::string format = "csv";
  std::string out_path;
  unsigned threads = 0;
};

inline int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
  SimulationConfig cfg;
  try {
    cfg.generations = opt.full_scale ? 10'700'000ull : opt.generations;
    if (cfg.generations < 1) throw detail_cli::UsageError("--generations must be >= 1");
    cfg.sampler = parse_sampler_token(opt.sampler, parse_base_token(opt.cond_base), opt.seed);
    if (opt.specs.size() == 1 && opt.specs[0] == "default15") {
      cfg.specs = default_specs();
    } else {
      for (const std::string& s : opt.specs) cfg.specs.push_back(parse_preference(s));
    }
    cfg.workers = opt.threads;
    if (opt.format != "csv" && opt.format != "json")
      throw detail_cli::UsageError("--format must be csv or json");
  } catch (const std::invalid_argument& e) {
    err << "simulate: " << e.what() << "\n";
    return kExitUsage;
  }

  SimulationReport report;
  double duration = 0.0;
  try {
    auto t0 = std::chrono::steady_clock::now();
    report = run_simulation(cfg);
    duration = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  } catch (const std::exception& e) {
    err << "simulate: " << e.what() << "\n";
    return kExitSolver;
  }

  RunManifest manifest = make_manifest(cfg, duration);
  if (opt.format == "json") {
    std::string text = report_to_json(report, manifest).dump(2) + "\n";
    if (opt.out_path.empty()) {
      out << text;
    } else if (!detail_cli::write_text_file(opt.out_path, text)) {
      err << "simulate: cannot write '" << opt.out_path << "'\n";
      return kExitIo;
    }
    return kExitOk;
  }
  std::string text = report_to_csv(report);
  if (opt.out_path.empty()) {
    out << text;
    return kExitOk;
  }
  // A CSV file gets the manifest as a JSON sidecar next to it.
  if (!detail_cli::write_text_file(opt.out_path, text)) {
    err << "simulate: cannot write '" << opt.out_path << "'\n";
    return kExitIo;
  }
  std::string sidecar = opt.out_path + ".manifest.json";
  if (!detail_cli::write_text_file(sidecar, manifest_to_json(manifest).dump(2) + "\n")) {
    err << "simulate: cannot write '" << sidecar << "'\n";
    return kExitIo;
  }
  return kExitOk;
}

inline int cmd_cdf(const std::string& risky, int points, const std::string& out_path,
                   std::ostream& out, std::ostream& err) {
  Lottery y = Lottery::degenerate(1.0);
  try {
    y = parse_lottery(risky);
    if (y.is_degenerate())
      throw detail_cli::UsageError("lottery is degenerate, its optimal CDF is a point mass");
    if (points < 4) throw detail_cli::UsageError("--points must be >= 4");
  } catch (const std::invalid_argument& e) {
    err << "cdf: " << e.what() << "\n";
    return kExitUsage;
  }

  const double hm = harmonic_mean(y), em = arithmetic_mean(y);
  const double margin = 0.05 * (em - hm);
  std::string text = "x,cdf\n";
  try {
    // Rows: one point below the support, the support endpoints and a uniform
    // interior grid, one point above. The CDF is exactly 0 at HM and 1 at E.
    std::vector<double> grid;
    grid.push_back(std::max(hm - margin, 0.5 * hm));
    int interior = points - 2;
    for (int i = 0; i < interior; ++i)
      grid.push_back(hm + (em - hm) * i / (interior - 1));
    grid.back() = em;
    grid.push_back(em + margin);
    for (double x : grid) {
      double c = x <= 0.0 ? 0.0 : optimal_cdf(y, x);
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", x, c);
      text += buf;
    }
  } catch (const std::exception& e) {
    err << "cdf: " << e.what() << "\n";
    return kExitSolver;
  }
  if (out_path.empty()) {
    out << text;
    return kExitOk;
  }
  if (!detail_cli::write_text_file(out_path, text)) {
    err << "cdf: cannot write '" << out_path << "'\n";
    return kExitIo;
  }
  return kExitOk;
}

// Worked certainty-equivalent examples with known orderings, used as an
// executable cross-check of the quantile machinery. Prints one PASS/FAIL
// line per assertion.
inline int cmd_self_check(std::ostream& out, std::ostream&) {
  int failures = 0;
  auto check = [&](const char* label, bool ok) {
    out << (ok ? "PASS " : "FAIL ") << label << "\n";
    if (!ok) ++failures;
  };

  const Lottery L = Lottery::degenerate(3.0);
  const Lottery M({{1.5, 0.75}, {20.0, 0.25}});
  const Lottery N({{10.0, 0.5}, {15.0, 0.5}});
  const Lottery X = mix(0.5, L, N);
  const Lottery Y = mix(0.5, M, N);
  double ce_l = median_agent_ce(L), ce_m = median_agent_ce(M);
  double ce_x = median_agent_ce(X), ce_y = median_agent_ce(Y);
  out << "median-ce sure-thing      = " << detail_cli::fixed12(ce_l) << "\n"
      << "median-ce long-shot       = " << detail_cli::fixed12(ce_m) << "\n"
      << "median-ce mix(sure-thing) = " << detail_cli::fixed12(ce_x) << "\n"
      << "median-ce mix(long-shot)  = " << detail_cli::fixed12(ce_y) << "\n";
  check("sure thing beats the long shot on its own", ce_l > ce_m);
  check("mixing flips the ranking across 6.1", ce_x < 6.1 && 6.1 < ce_y);

  // Hand-computed weighted-average certainty equivalents at beta = 1/2.
  const Lottery L2({{6.0, 0.5}, {2.0, 0.5}});
  const Lottery M2 = Lottery::degenerate(3.5);
  const Lottery N2 = Lottery::degenerate(4.0);
  const double beta = 0.5;
  double mix_l = weighted_average_ce(beta, mix(0.5, L2, N2));
  double mix_m = weighted_average_ce(beta, mix(0.5, M2, N2));
  double expected_mix_l = 4.0 - 4.0 * beta / 7.0;
  double expected_mix_m =
      (64.0 - 16.0 * beta + beta * beta - beta * beta * beta) / (2.0 * (8.0 - beta));
  check("standalone values tie at 3.5",
        std::abs(weighted_average_ce(beta, L2) - 3.5) <= 1e-12 &&
            std::abs(weighted_average_ce(beta, M2) - 3.5) <= 1e-12);
  check("mixed value of the spread lottery matches closed form",
        std::abs(mix_l - expected_mix_l) <= 1e-12);
  check("mixed value of the sure thing matches closed form",
        std::abs(mix_m - expected_mix_m) <= 1e-12);
  check("equal standalone values diverge after mixing", std::abs(mix_l - mix_m) > 1e-6);

  out << (failures == 0 ? "all checks passed\n" : "checks FAILED\n");
  return failures == 0 ? kExitOk : kExitCheckFailed;
}

// argv-style entry point (argv[0] is not included in `args`).
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal bet hedging under aggregate risk", "bethedge"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  auto* alpha = app.add_subcommand("alpha-star", "Optimal risky share for one choice problem");
  std::string alpha_risky;
  double alpha_safe = 1.0;
  alpha->add_option("--risky", alpha_risky, "Risky lottery, v1:p1,v2:p2,...")->required();
  alpha->add_option("--safe", alpha_safe, "Safe payoff mu > 0")->required();

  auto* ce = app.add_subcommand("ce", "Certainty equivalent of a quantile agent");
  std::string ce_risky;
  double ce_agent = 0.5;
  ce->add_option("--agent", ce_agent, "Population quantile in [0,1]")->required();
  ce->add_option("--risky", ce_risky, "Risky lottery, v1:p1,v2:p2,...")->required();

  auto* sim = app.add_subcommand("simulate", "Monte Carlo comparison of preference rules");
  SimulateOptions opt;
  sim->add_option("--generations", opt.generations, "Number of generations (default 1000000)");
  sim->add_flag("--full-scale", opt.full_scale, "Run the full 10700000-generation comparison");
  sim->add_option("--seed", opt.seed, "Random seed (default 0)");
  sim->add_option("--sampler", opt.sampler, "main | gm-ratio | cond:<k>,<i> | cond:gm-mu-e");
  sim->add_option("--cond-base", opt.cond_base, "Base sampler for cond:* (main | gm-ratio)");
  sim->add_option("--specs", opt.specs, "Preference specs, or default15")->expected(-1);
  sim->add_option("--format", opt.format, "csv | json");
  sim->add_option("--out", opt.out_path, "Write the report here instead of stdout");
  sim->add_option("--threads", opt.threads, "Worker threads (0 = all cores)");

  auto* cdf = app.add_subcommand("cdf", "Tabulate the optimal safe-value CDF");
  std::string cdf_risky, cdf_out;
  int cdf_points = 23;
  cdf->add_option("--risky", cdf_risky, "Risky lottery, v1:p1,v2:p2,...")->required();
  cdf->add_option("--points", cdf_points, "Number of rows (default 23)");
  cdf->add_option("--out", cdf_out, "Write the table here instead of stdout");

  auto* verify = app.add_subcommand("self-check", "Run the worked-example cross-checks");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "bethedge: " << e.what() << "\n";
    return kExitUsage;
  }

  if (alpha->parsed()) return cmd_alpha_star(alpha_risky, alpha_safe, out, err);
  if (ce->parsed()) return cmd_ce(ce_agent, ce_risky, out, err);
  if (sim->parsed()) return cmd_simulate(opt, out, err);
  if (cdf->parsed()) return cmd_cdf(cdf_risky, cdf_points, cdf_out, out, err);
  if (verify->parsed()) return cmd_self_check(out, err);
  err << "bethedge: no command\n";
  return kExitUsage;
}

}  // namespace bethedge::cli
