#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ggsel/selection.hpp"
#include "ggsel/simharness.hpp"

namespace ggsel::io {

using json = nlohmann::ordered_json;

struct AnalysisConfig {
  AgeScale ages;  // origin 60, truncation 90 by default
  std::vector<std::string> criteria = {"aic_star", "fic_mae", "pretest", "lrt"};
  std::vector<FocusSpec> foci;  // empty -> sigma2 + curvature at the p99 age
  FitOptions fit;
  std::uint64_t seed = 0;
  bool info_at_null = false;  // evaluate J at the null fit instead of the full MLE
};

struct IngestResult {
  Sample sample;
  std::string path;
  std::string digest;  // fnv1a64 over the raw file bytes
  long long n_rows = 0;
  std::vector<long long> rejected_rows;  // line numbers with age <= truncation
  double min_age = 0.0;
  double max_age = 0.0;
};

// CSV with header "id,age_at_death": calendar ages in decimal years. Rows at
// or below the truncation age are excluded and listed; malformed rows and
// duplicate ids abort with the offending line number.
IngestResult ingest(const std::string& path, const AnalysisConfig& cfg);

struct FitSummary {
  double a = 0, b = 0, sigma2 = 0, loglik = 0;
  std::array<double, 3> se{};
  bool se_valid = false;  // false at a boundary optimum
  bool converged = false;
  int n_starts_used = 0;
  bool boundary_hit = false;
};

struct ReportDocument {
  int schema_version = 0;
  std::string software_name;
  std::string software_version;
  std::string timestamp;  // excluded from determinism comparisons
  json config_echo;
  std::optional<json> input;  // present when built from a file
  json sample_summary;
  FitSummary fit_null_summary;
  FitSummary fit_full_summary;
  json info_summary;
  std::vector<SelectionReport> criteria;
  std::optional<LrtResult> lrt_result;
  std::vector<std::string> warnings;

  json to_json() const;
  static ReportDocument from_json(const json& j);
};

// Fit both models, evaluate the configured criteria and foci, and assemble
// the report. Deterministic given the config.
ReportDocument analyze(const Sample& sample, const AnalysisConfig& cfg);
ReportDocument analyze(const IngestResult& in, const AnalysisConfig& cfg);

// Single-year occurrence-exposure rates on the calendar-age scale with
// fitted hazards from both models at mid-year points.
struct RateRow {
  int age = 0;
  long long deaths = 0;
  double exposure = 0.0;
  double rate = 0.0;
  std::optional<double> ci_lo;  // absent when deaths = 0
  std::optional<double> ci_hi;
  double fitted_gompertz = 0.0;
  double fitted_gg = 0.0;
};

struct RateTable {
  std::vector<RateRow> rows;
  std::string to_csv() const;
};

RateTable rate_table(const Sample& sample, const FitResult& fit_null,
                     const FitResult& fit_full, const AgeScale& ages);

// Strict scenario config: the Scenario fields as JSON, unknown keys rejected.
sim::Scenario load_scenario_config(const std::string& path);
json metrics_to_json(const sim::ScenarioMetrics& m);
json oracle_to_json(const sim::OracleStudy& s);
std::string oracle_to_csv(const sim::OracleStudy& s);

// write-temp-then-rename; never leaves a half-written file at `path`.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);
std::string fnv1a64_hex(const std::string& bytes);

}  // namespace ggsel::io
