#pragma once

// Serialization of simulation reports: CSV for the result table, JSON for
// the full-precision report plus the run manifest that makes a run
// repeatable.

#include <array>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bethedge/preferences.hpp"
#include "bethedge/samplers.hpp"
#include "bethedge/simulate.hpp"
#include "bethedge/version.hpp"

namespace bethedge {

enum class OutputFormat { Csv, Json };

// Everything needed to reproduce a run's result rows (duration is
// informational and excluded from reproducibility).
struct RunManifest {
  std::uint64_t seed = 0;
  std::uint64_t generations = 0;
  std::string sampler;           // sampler token, e.g. "main" or "cond:2,1"
  std::string sampler_base;      // base token for conditioned samplers
  std::vector<std::string> specs;
  std::string tool_version;
  double duration_seconds = 0.0;
};

inline RunManifest make_manifest(const SimulationConfig& cfg, double duration_seconds) {
  RunManifest m;
  m.seed = cfg.sampler.seed;
  m.generations = cfg.generations;
  m.sampler = format_sampler_token(cfg.sampler);
  m.sampler_base = format_base_token(cfg.sampler.base);
  for (const PreferenceSpec& spec : cfg.specs) m.specs.push_back(format_preference(spec));
  m.tool_version = kToolVersion;
  m.duration_seconds = duration_seconds;
  return m;
}

inline SimulationConfig config_from_manifest(const RunManifest& m) {
  SimulationConfig cfg;
  cfg.generations = m.generations;
  cfg.sampler = parse_sampler_token(m.sampler, parse_base_token(m.sampler_base), m.seed);
  for (const std::string& s : m.specs) cfg.specs.push_back(parse_preference(s));
  return cfg;
}

namespace detail {

// Six significant digits, the CSV table precision.
inline std::string format_sig6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace detail

inline constexpr const char* kCsvHeader = "spec,mean_alpha,gm_growth,relative_loss";

// Spec tokens may themselves contain commas, so the spec column is quoted
// whenever needed, standard CSV style.
inline std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string report_to_csv(const SimulationReport& report) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const SpecResult& row : report.rows) {
    out += csv_quote(format_preference(row.spec));
    out += ',';
    out += detail::format_sig6(row.mean_alpha);
    out += ',';
    out += detail::format_sig6(row.gm_growth);
    out += ',';
    out += detail::format_sig6(row.relative_loss);
    out += '\n';
  }
  return out;
}

struct CsvRow {
  std::string spec;
  double mean_alpha = 0.0;
  double gm_growth = 0.0;
  double relative_loss = 0.0;
};

inline std::vector<CsvRow> parse_report_csv(const std::string& text) {
  std::vector<CsvRow> rows;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line(text.data() + pos,
                          (eol == std::string::npos ? text.size() : eol) - pos);
    pos = eol == std::string::npos ? text.size() : eol + 1;
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kCsvHeader)
        throw std::invalid_argument("parse_report_csv: unexpected header '" + std::string(line) +
                                    "'");
      header_seen = true;
      continue;
    }
    std::array<std::string, 4> fields;
    std::size_t start = 0;
    for (int f = 0; f < 4; ++f) {
      if (start > line.size())
        throw std::invalid_argument("parse_report_csv: expected 4 fields per row");
      std::string field;
      std::size_t i = start;
      if (i < line.size() && line[i] == '"') {
        bool closed = false;
        for (++i; i < line.size(); ++i) {
          if (line[i] == '"') {
            if (i + 1 < line.size() && line[i + 1] == '"') {
              field += '"';
              ++i;
            } else {
              closed = true;
              ++i;
              break;
            }
          } else {
            field += line[i];
          }
        }
        if (!closed || (i < line.size() && line[i] != ','))
          throw std::invalid_argument("parse_report_csv: malformed quoted field");
      } else {
        std::size_t comma = line.find(',', i);
        i = comma == std::string_view::npos ? line.size() : comma;
        field.assign(line.substr(start, i - start));
      }
      if (f < 3 && i >= line.size())
        throw std::invalid_argument("parse_report_csv: expected 4 fields per row");
      if (f == 3 && i < line.size())
        throw std::invalid_argument("parse_report_csv: trailing content after 4 fields");
      fields[f] = std::move(field);
      start = i + 1;
    }
    rows.push_back({fields[0], detail::parse_double(fields[1], "parse_report_csv"),
                    detail::parse_double(fields[2], "parse_report_csv"),
                    detail::parse_double(fields[3], "parse_report_csv")});
  }
  if (!header_seen) throw std::invalid_argument("parse_report_csv: empty input");
  return rows;
}

inline nlohmann::json manifest_to_json(const RunManifest& m) {
  return {{"seed", m.seed},
          {"generations", m.generations},
          {"sampler", m.sampler},
          {"sampler_base", m.sampler_base},
          {"specs", m.specs},
          {"tool_version", m.tool_version},
          {"duration_seconds", m.duration_seconds}};
}

inline RunManifest manifest_from_json(const nlohmann::json& j) {
  RunManifest m;
  m.seed = j.at("seed").get<std::uint64_t>();
  m.generations = j.at("generations").get<std::uint64_t>();
  m.sampler = j.at("sampler").get<std::string>();
  m.sampler_base = j.at("sampler_base").get<std::string>();
  m.specs = j.at("specs").get<std::vector<std::string>>();
  m.tool_version = j.value("tool_version", std::string{});
  m.duration_seconds = j.value("duration_seconds", 0.0);
  return m;
}

// Full-precision report: doubles serialize with shortest round-trip digits,
// so reading the JSON back reproduces the exact binary values.
inline nlohmann::json report_to_json(const SimulationReport& report, const RunManifest& manifest) {
  nlohmann::json rows = nlohmann::json::array();
  for (const SpecResult& row : report.rows)
    rows.push_back({{"spec", format_preference(row.spec)},
                    {"mean_alpha", row.mean_alpha},
                    {"gm_growth", row.gm_growth},
                    {"relative_loss", row.relative_loss}});
  return {{"manifest", manifest_to_json(manifest)},
          {"generations", report.generations},
          {"seed", report.seed},
          {"gm_growth_optimal", report.gm_growth_optimal},
          {"rows", rows}};
}

}  // namespace bethedge
