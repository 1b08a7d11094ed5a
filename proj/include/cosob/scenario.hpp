#pragma once

// JSON scenarios: named manifolds and families plus a list of analyses, each
// with an expectation. Parsing is fail-closed: unknown fields, wrong types and
// out-of-range values raise ConfigError.

#include <optional>
#include <string>
#include <vector>

#include "cosob/energy.hpp"
#include "cosob/gallery.hpp"

namespace cosob {

inline constexpr int kScenarioSchema = 1;

enum class AnalysisKind { Energy, ChainRule, Oscillation, GnRatio, ValidityWindow, NormCompose, Criterion };

struct Analysis {
  std::string id;
  AnalysisKind kind = AnalysisKind::Energy;
  std::optional<ExampleFamily> family;
  std::optional<QuadratureSpec> quadrature;
  std::optional<Sublevel> sublevel;
  int order = 1;         // energy order j, chain-rule order k, GN top order k
  int lower_order = 1;   // GN intermediate order j
  double exponent = 1.0; // energy exponent q, GN exponent p, window exponent p
  WindowPurpose purpose = WindowPurpose::Default;
  int samples = 256;     // oscillation samples, norm-compose pairs
  std::uint64_t seed = 0;
  int criterion = 0;
  std::string expect;    // classification, GN status, window state or "pass"
  std::optional<double> value;
  std::optional<double> tolerance;
};

struct Scenario {
  std::string id;
  std::string description;
  std::vector<Analysis> analyses;
  std::optional<std::string> output_dir;
};

/// Parses and validates a scenario document.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

struct ReportRow {
  std::string scenario_id;
  std::string check_id;
  std::string family;
  std::string params;
  std::string order;
  std::string exponent;
  std::string value;
  std::string classification;
  std::string expected;
  bool pass = false;
  double runtime_ms = 0.0;
  std::string detail_json;  // analysis-specific fields
};

struct ScenarioReport {
  std::string scenario_id;
  std::vector<ReportRow> rows;

  bool all_pass() const;
  std::string to_csv(bool timing = false) const;
  std::string to_json(bool timing = false) const;
};

struct RunOptions {
  int threads = 0;
  bool timing = false;
};

ScenarioReport run_scenario(const Scenario& s, const RunOptions& opts);

/// Exit codes of the command-line runner.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;

/// The CSV header shared by every report.
std::string csv_header();

}  // namespace cosob
