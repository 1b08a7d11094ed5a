#include <gtest/gtest.h>

#include <string>

#include "cosob/error.hpp"
#include "cosob/scenario.hpp"

using namespace cosob;

namespace {

const std::string kSmall = R"({
  "schema": 1,
  "id": "small",
  "description": "quick checks",
  "families": {
    "rp": {"family": "radial_power", "alpha": 0.5, "m": 3},
    "hog": {"family": "hedgehog", "m": 3}
  },
  "quadrature": {"domain": "ball", "r": 1.0, "n_annuli": 8, "radial_nodes": 4, "angular_nodes": 3},
  "analyses": [
    {"id": "rp-d1-q1", "kind": "energy", "family": "rp", "order": 1, "exponent": 1, "expect": "finite"},
    {"id": "rp-d1-q3", "kind": "energy", "family": "rp", "order": 1, "exponent": 3, "expect": "divergent"},
    {"id": "hog-osc", "kind": "oscillation", "family": "hog", "samples": 64, "expect": "value",
     "value": 3.141592653589793, "tolerance": 1e-9},
    {"id": "spiral-window", "kind": "validity_window",
     "family": {"family": "spiral", "alpha": 1.5, "m": 3}, "expect": "satisfied"},
    {"id": "compose", "kind": "norm_compose", "samples": 50, "seed": 3, "expect": "pass"}
  ]
})";

std::string with(const std::string& base, const std::string& from, const std::string& to) {
  std::string s = base;
  const auto pos = s.find(from);
  if (pos == std::string::npos) throw std::runtime_error("pattern not found: " + from);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST(Scenario, ParsesSmallScenario) {
  const Scenario s = parse_scenario(kSmall);
  EXPECT_EQ(s.id, "small");
  ASSERT_EQ(s.analyses.size(), 5u);
  EXPECT_EQ(s.analyses[0].kind, AnalysisKind::Energy);
  ASSERT_TRUE(s.analyses[0].quadrature.has_value());
  EXPECT_EQ(s.analyses[0].quadrature->n_annuli, 8);
  EXPECT_EQ(s.analyses[4].seed, 3u);
}

TEST(Scenario, RejectsUnknownFields) {
  EXPECT_THROW(parse_scenario(with(kSmall, R"("description")", R"("extra": 1, "description")")), ConfigError);
  EXPECT_THROW(parse_scenario(with(kSmall, R"("alpha": 0.5,)", R"("alpha": 0.5, "gamma": 2,)")), ConfigError);
  EXPECT_THROW(parse_scenario(with(kSmall, R"("samples": 50,)", R"("samples": 50, "order": 2,)")), ConfigError);
}

TEST(Scenario, RejectsBadValues) {
  EXPECT_THROW(parse_scenario(with(kSmall, R"("schema": 1)", R"("schema": 2)")), ConfigError);
  EXPECT_THROW(parse_scenario(with(kSmall, R"("n_annuli": 8)", R"("n_annuli": 0)")), ConfigError);
  EXPECT_THROW(parse_scenario(with(kSmall, R"("family": "rp", "order": 1, "exponent": 1)",
                                   R"("family": "nope", "order": 1, "exponent": 1)")),
               ConfigError);
  EXPECT_THROW(parse_scenario(with(kSmall, R"("expect": "finite")", R"("expect": "bounded")")), ConfigError);
  EXPECT_THROW(parse_scenario(with(kSmall, R"("alpha": 0.5)", R"("alpha": -0.5)")), ConfigError);
  EXPECT_THROW(parse_scenario(with(kSmall, R"("id": "rp-d1-q3")", R"("id": "rp-d1-q1")")), ConfigError);
  EXPECT_THROW(parse_scenario("{not json"), ConfigError);
  EXPECT_THROW(load_scenario("/nonexistent/scenario.json"), ConfigError);
}

TEST(Scenario, EmptyAnalysesProduceHeaderOnly) {
  const Scenario s = parse_scenario(R"({"schema": 1, "id": "empty", "analyses": []})");
  const ScenarioReport r = run_scenario(s, {});
  EXPECT_TRUE(r.rows.empty());
  EXPECT_EQ(r.to_csv(), csv_header() + "\n");
}

TEST(Scenario, CsvHeaderAndBlankRuntime) {
  EXPECT_EQ(csv_header(),
            "scenario_id,check_id,family,params,order,exponent,value,classification,expected,verdict,runtime_ms");
  const ScenarioReport r = run_scenario(parse_scenario(kSmall), {1, false});
  const std::string csv = r.to_csv();
  std::size_t lines = 0;
  for (std::size_t pos = csv.find('\n'); pos != std::string::npos; pos = csv.find('\n', pos + 1)) {
    ++lines;
    if (lines > 1) EXPECT_EQ(csv[pos - 1], ',');
  }
  EXPECT_EQ(lines, 6u);
}

TEST(Scenario, ExpectationsHold) {
  const ScenarioReport r = run_scenario(parse_scenario(kSmall), {1, false});
  for (const auto& row : r.rows) EXPECT_TRUE(row.pass) << row.check_id << ": " << row.classification;
  EXPECT_TRUE(r.all_pass());
}

TEST(Scenario, FailingExpectationIsReported) {
  const Scenario s = parse_scenario(with(kSmall, R"("expect": "divergent")", R"("expect": "finite")"));
  const ScenarioReport r = run_scenario(s, {1, false});
  EXPECT_FALSE(r.all_pass());
  EXPECT_FALSE(r.rows[1].pass);
}

TEST(Scenario, ReportsAreIndependentOfThreadCount) {
  const Scenario s = parse_scenario(kSmall);
  const ScenarioReport a = run_scenario(s, {1, false}), b = run_scenario(s, {3, false});
  EXPECT_EQ(a.to_csv(), b.to_csv());
  EXPECT_EQ(a.to_json(), b.to_json());
}
