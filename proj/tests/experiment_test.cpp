#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "rsmm/errors.hpp"
#include "rsmm/experiment.hpp"

using namespace rsmm;
using nlohmann::json;

namespace {

json desk_config() {
  return json::parse(R"({
    "params": {"N": 5, "k": 4, "l": 2, "alpha": "1/4", "q": 97, "C": 4, "D": 1, "E": 1, "m": 8},
    "seed": 11,
    "delay_model": {"kind": "exponential", "mean": 1.0},
    "audit": {"subsets": "all", "exhaustive_oracle": false},
    "output": {"format": "json"}
  })");
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig cfg = parse_config(desk_config());
  CHECK(cfg.params.N == 5);
  CHECK(cfg.params.alpha == Rational(1, 4));
  CHECK(cfg.seed == 11);
  CHECK(cfg.delay.kind == DelayModel::Kind::kExponential);
  CHECK(cfg.audit.all_subsets);
  CHECK(cfg.format == ReportFormat::kJson);

  // Serialized config parses back to the same thing.
  const ExperimentConfig again = parse_config(json::parse(config_to_json(cfg).dump()));
  CHECK(config_to_json(again).dump() == config_to_json(cfg).dump());

  auto minimal = json::parse(R"({"params": {"N": 3, "k": 2, "l": 1, "alpha": "1/2", "q": 7,
                                            "C": 2, "D": 1, "E": 1, "m": 2}})");
  CHECK(parse_config(minimal).seed == 0);
}

TEST_CASE("config errors") {
  auto doc = desk_config();
  doc["params"]["alpha"] = "1/0";
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  doc = desk_config();
  doc["params"]["alpha"] = 0.25;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  doc = desk_config();
  doc["params"]["colour"] = 1;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  doc = desk_config();
  doc["extra"] = true;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  doc = desk_config();
  doc["params"].erase("q");
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  doc = desk_config();
  doc["params"]["q"] = 91;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  doc = desk_config();
  doc["delay_model"] = json{{"kind", "gamma"}};
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  doc = desk_config();
  doc["audit"]["subsets"] = "some";
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  doc = desk_config();
  doc["output"]["format"] = "xml";
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("desk configuration run") {
  const RunReport report = run_experiment(parse_config(desk_config()));
  CHECK(report.passed());
  CHECK(report.scheme == SchemeCase::kCase2);
  CHECK(report.p == 4);
  CHECK(report.recoverability.all_exact);
  // The straggler round plus every 4-subset.
  CHECK(report.recoverability.subsets_tested == 6);
  CHECK(report.recoverability.fastest.size() == 4);
  REQUIRE(report.leakage.has_value());
  CHECK(report.leakage->matches_finite);
  CHECK(report.leakage->privacy_holds);
  CHECK(report.leakage->rows[3].measured == Rational(5, 8));
  REQUIRE(report.rates.has_value());
  CHECK(report.rates->achieved_rate_finite == Rational(2, 3));
  CHECK(report.rates->randomness_achieved == Rational(1, 2));
  CHECK(report.trace.size() == 5);
}

TEST_CASE("no-collusion run") {
  auto doc = desk_config();
  doc["params"]["l"] = 0;
  doc["params"]["alpha"] = "0/1";
  const RunReport report = run_experiment(parse_config(doc));
  CHECK(report.passed());
  CHECK(report.scheme == SchemeCase::kCase1);
  CHECK(report.randomness_consumed == 0);
  for (const auto& row : report.leakage->rows) {
    CHECK(*row.measured == Rational(std::min<std::int64_t>(row.t, 4), 4));
  }
  CHECK(report.rates->randomness_achieved == Rational(0));
  CHECK_FALSE(report.rates->randomness_upper.has_value());
}

TEST_CASE("exhaustive oracle inside a run") {
  auto doc = json::parse(R"({
    "params": {"N": 2, "k": 2, "l": 1, "alpha": "1/2", "q": 3, "C": 2, "D": 1, "E": 1, "m": 2},
    "audit": {"subsets": "all", "exhaustive_oracle": true}
  })");
  const RunReport report = run_experiment(parse_config(doc));
  CHECK(report.passed());
  CHECK(report.oracle.enabled);
  CHECK(report.oracle.subsets_checked == 4);
  CHECK(report.oracle.max_deviation <= kOracleTolerance);
}

TEST_CASE("reports are reproducible") {
  const ExperimentConfig cfg = parse_config(desk_config());
  for (ReportFormat format : {ReportFormat::kJson, ReportFormat::kCsv}) {
    CHECK(emit_report(run_experiment(cfg), format) == emit_report(run_experiment(cfg), format));
  }
  ExperimentConfig other = cfg;
  other.seed = 12;
  CHECK(emit_report(run_experiment(other), ReportFormat::kJson) !=
        emit_report(run_experiment(cfg), ReportFormat::kJson));

  const auto parsed = json::parse(emit_report(run_experiment(cfg), ReportFormat::kJson));
  CHECK(parsed["passed"] == true);
  CHECK(parsed["rates"]["achieved_rate_finite"] == "2/3");
  CHECK(parsed["leakage"]["profile"][2]["measured"] == "1/4");
}

TEST_CASE("csv layout") {
  const ExperimentConfig cfg = parse_config(desk_config());
  const std::string csv = emit_report(run_experiment(cfg), ReportFormat::kCsv);
  CHECK(csv.rfind("metric,value\n", 0) == 0);
  CHECK(count_lines(csv) == 1 + csv_fixed_rows() + 32);
  CHECK(csv.find("rates.achieved_rate_finite,2/3\n") != std::string::npos);
  CHECK(csv.find("leakage.subset.{1-2-3},5/8\n") != std::string::npos);

  auto doc = desk_config();
  doc["audit"]["subsets"] = json{{"sampled", 0}};
  const std::string empty = emit_report(run_experiment(parse_config(doc)), ReportFormat::kCsv);
  CHECK(count_lines(empty) == 1 + csv_fixed_rows());
  CHECK(empty.find("leakage.subset.") == std::string::npos);
  CHECK(empty.find("rates.achieved_rate_finite,2/3\n") != std::string::npos);

  doc["audit"]["subsets"] = json{{"sampled", 6}};
  const RunReport sampled = run_experiment(parse_config(doc));
  CHECK(sampled.leakage->subsets.size() == 6);
  CHECK(count_lines(emit_report(sampled, ReportFormat::kCsv)) == 1 + csv_fixed_rows() + 6);
}

TEST_CASE("stages can be switched off") {
  const ExperimentConfig cfg = parse_config(desk_config());
  const RunReport audit_only = run_experiment(cfg, Stages{false, true, false});
  CHECK(audit_only.recoverability.subsets_tested == 0);
  CHECK_FALSE(audit_only.rates.has_value());
  CHECK(audit_only.leakage.has_value());
  const RunReport roundtrip_only = run_experiment(cfg, Stages{true, false, false});
  CHECK_FALSE(roundtrip_only.leakage.has_value());
  CHECK(roundtrip_only.passed());
}

TEST_CASE("bounds grid") {
  const auto grid = bounds_grid(4);
  // k=2: 1 l, k=3: 2, k=4: 3 -> 6 (k, l) pairs, 8 alphas, 3 shapes.
  CHECK(grid.size() == 6 * 8 * 3);
  const std::string csv = bounds_grid_csv(4);
  CHECK(count_lines(csv) == 1 + grid.size());
}

TEST_CASE("fnv1a") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}
