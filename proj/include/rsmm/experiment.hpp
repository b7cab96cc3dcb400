#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rsmm/audit.hpp"
#include "rsmm/bounds.hpp"
#include "rsmm/encoder.hpp"
#include "rsmm/plan.hpp"
#include "rsmm/servers.hpp"

namespace rsmm {

inline constexpr const char* kVersion = "1.0.0";

enum class ReportFormat { kJson, kCsv };

struct DelayConfig {
  DelayModel::Kind kind = DelayModel::Kind::kExponential;
  std::vector<double> delays;
  double mean = 1.0;
  double low = 0.0;
  double high = 1.0;
  std::optional<std::uint64_t> seed;  // derived from the run seed when absent
};

struct AuditConfig {
  bool all_subsets = true;
  std::size_t sampled = 0;  // used when !all_subsets
  bool exhaustive_oracle = false;
};

struct ExperimentConfig {
  Params params;
  std::uint64_t seed = 0;
  DelayConfig delay;
  AuditConfig audit;
  std::string output_path;  // empty = stdout
  ReportFormat format = ReportFormat::kJson;
};

// Throws ConfigError naming the offending field.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);
nlohmann::ordered_json config_to_json(const ExperimentConfig& config);
ReportFormat parse_format(const std::string& text);

DelayModel make_delay_model(const ExperimentConfig& config);

// Independent streams derived from the run seed.
enum class Stream : std::uint64_t { kA = 1, kB = 2, kMasks = 3, kDelays = 4, kSubsets = 5 };

// Errors from the library propagate as StageError, naming the stage.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// The inputs and intermediate artifacts of one straggler round.
struct Pipeline {
  BlockPlan plan;
  MatrixSeq a;
  MatrixSeq b;
  RandomnessPool pool;
  SharePackage shares;
  RoundResult round;
};

// Draws A and B from the seed, encodes and simulates one round.
// Library errors surface as StageError.
Pipeline build_pipeline(const ExperimentConfig& config);

struct Recoverability {
  std::size_t subsets_tested = 0;
  bool all_exact = true;
  std::vector<std::size_t> fastest;  // servers used by the straggler round
};

struct OracleCheck {
  bool enabled = false;
  std::size_t subsets_checked = 0;
  double max_deviation = 0.0;
  bool within_tolerance = true;
};

struct RunReport {
  ExperimentConfig config;
  std::string config_hash;
  SchemeCase scheme = SchemeCase::kCase1;
  std::size_t p = 0;
  std::size_t L = 0;
  std::size_t randomness_consumed = 0;
  Recoverability recoverability;
  std::optional<LeakageProfile> leakage;
  OracleCheck oracle;
  std::optional<RateReport> rates;
  std::vector<Arrival> trace;

  // Every invariant the run checks.
  bool passed() const;
};

inline constexpr double kOracleTolerance = 1e-6;

// Which stages run_experiment executes; subcommands switch some off.
struct Stages {
  bool roundtrip = true;
  bool audit = true;
  bool rates = true;
};

RunReport run_experiment(const ExperimentConfig& config, Stages stages = {});

nlohmann::ordered_json report_to_json(const RunReport& report);
std::string emit_report(const RunReport& report, ReportFormat format);

// Rows in the CSV before the per-subset leakage rows (header excluded).
std::size_t csv_fixed_rows();

// Bounds table over k <= max_k, l in [1, k), alpha in {0, 1/8, ..., 7/8},
// D/E in {1/2, 1, 2}.
nlohmann::ordered_json bounds_grid(std::size_t max_k);
std::string bounds_grid_csv(std::size_t max_k);

std::string fnv1a_hex(const std::string& text);

}  // namespace rsmm
