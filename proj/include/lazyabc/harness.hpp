#pragma once

#include <filesystem>
#include <memory>
#include <optional>

#include <json.hpp>

#include "lazyabc/csv.hpp"
#include "lazyabc/models/conjugate_normal.hpp"
#include "lazyabc/models/triple_summary.hpp"
#include "lazyabc/tuning.hpp"

namespace lazyabc {

inline constexpr const char* kVersion = "lazyabc 0.1.0";

// Run configuration, parsed from a JSON file. Every field except
// `model` and `mode` has a default, so a minimal config names only
// those two.
struct RunConfig {
  std::string model;              // "conjugate_normal" | "triple_summary"
  nlohmann::json model_params;    // forwarded to the model builder
  std::string mode;               // "standard" | "lazy" | "tune-then-lazy"
  AbcConfig abc;
  std::size_t training_size = 0;  // 0 = max(100, n_draws / 10)
  std::size_t workers = 1;
  std::filesystem::path out_dir = ".";
  double alpha_min = ContinuationPolicy::kDefaultAlphaMin;
  double nw_bandwidth = 0.5;
  std::size_t nw_max_points = 500;  // 0 = keep every training point
  std::optional<double> lambda_override;
  // Lazy mode only: "always_one", "constant", or a policy file path.
  std::string policy = "always_one";
  double constant_alpha = 1.0;
  nlohmann::json proposal;  // empty = sample from the prior
};

RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

std::unique_ptr<TwoStageModel> build_model(const RunConfig& cfg);
// Null when the proposal is the prior.
std::unique_ptr<Distribution> build_proposal(const RunConfig& cfg,
                                             const TwoStageModel& model);

// Aggregated result of one run; everything needed to compare analyses.
struct EfficiencyReport {
  std::string mode;
  std::string model;
  double bandwidth = 0.0;
  std::string kernel;
  std::string distance;
  std::string observed_hash;
  std::uint64_t master_seed = 0;

  std::size_t n_draws = 0;
  std::size_t n_stopped = 0;
  std::size_t n_failed = 0;
  double ess = 0.0;
  double z_hat = 0.0;
  bool degenerate_sample = false;

  double draws_cpu_seconds = 0.0;   // sum of per-draw (t1 + t2) over workers
  double tuning_cpu_seconds = 0.0;
  double total_cpu_seconds = 0.0;   // draws + tuning
  double wall_seconds = 0.0;        // never used in efficiency math

  std::optional<double> estimated_relative_efficiency;
  std::optional<double> actual_relative_efficiency;
};

nlohmann::ordered_json report_to_json(const EfficiencyReport& report);
EfficiencyReport report_from_json(const nlohmann::json& j);
EfficiencyReport load_report(const std::filesystem::path& path);

// The stopping-rule file written by tune runs; self-contained (stores
// the regressors, standardization, lambda, subset and floor).
void save_policy(const std::filesystem::path& path,
                 const ContinuationPolicy& policy,
                 std::optional<double> estimated_efficiency = std::nullopt);
struct LoadedPolicy {
  ContinuationPolicy policy;
  std::optional<double> estimated_efficiency;
};
LoadedPolicy load_policy(const std::filesystem::path& path);

// FNV-1a over the model's observed summary bytes; lets `compare` check
// two runs really analyzed the same data.
std::string observed_hash(const TwoStageModel& model);

struct RunResult {
  EfficiencyReport report;
  std::filesystem::path draws_path;
  std::filesystem::path report_path;
  std::filesystem::path policy_path;    // tune-then-lazy only
  std::filesystem::path training_path;  // tune-then-lazy only
};

// Executes the configured mode and persists draws CSV + report JSON
// (plus training CSV and policy JSON for tune-then-lazy).
RunResult cmd_run(const RunConfig& cfg);

struct TuneOptions {
  double nw_bandwidth = 0.5;
  double alpha_min = ContinuationPolicy::kDefaultAlphaMin;
  std::size_t nw_max_points = 500;
  std::optional<double> lambda_override;
  std::filesystem::path out_dir = ".";
};

struct TuneResult {
  TuningResult tuning;
  std::filesystem::path policy_path;
};

// Refits a stopping rule from a recorded training CSV.
TuneResult cmd_tune(const std::filesystem::path& records_csv,
                    const TuneOptions& options);

struct CompareResult {
  double actual_relative_efficiency = 0.0;
  std::string table;
  nlohmann::ordered_json as_json;
};

// Pairs a standard-run report with a lazy-run report; refuses runs
// that differ in model, bandwidth, kernel, distance or observed data.
CompareResult compare_reports(const EfficiencyReport& standard_report,
                              const EfficiencyReport& lazy_report);
CompareResult cmd_compare(const std::filesystem::path& standard_report_path,
                          const std::filesystem::path& lazy_report_path);

// Recomputes ESS, mean weight and CPU totals from a draws CSV.
EfficiencyReport cmd_report(const std::filesystem::path& draws_csv);

}  // namespace lazyabc
