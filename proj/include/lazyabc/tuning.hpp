#pragma once

#include "lazyabc/engine.hpp"

namespace lazyabc {

// One training-run row: everything needed to refit stopping rules and
// re-estimate efficiency offline. Collected with the continuation
// probability pinned to 1, so l_abc here is the raw kernel likelihood.
struct TrainingRecord {
  ParamVector theta;
  std::vector<double> phi;  // all candidate decision statistics
  double l_abc = 0.0;
  double t1_seconds = 0.0;
  double t2_seconds = 0.0;
  double prior_density = 0.0;
  double proposal_density = 0.0;
  std::uint64_t seed_index = 0;
};

struct TrainingCollection {
  std::vector<TrainingRecord> records;  // successful iterations only
  std::vector<WeightedDraw> draws;      // every iteration, failures flagged
};

// Runs `m` full (never stopped) iterations and records decision
// statistics for every candidate so later selection needs no
// re-simulation. The draws carry the same thetas and weights a
// standard run at these indices would produce, so the harness can fold
// them into the final output sample.
TrainingCollection collect_training(const TwoStageModel& model,
                                    const Distribution& proposal,
                                    std::size_t m, const AbcConfig& cfg,
                                    const EngineOptions& opt = {});

// Responses floored at this value when fitting continuation times, so
// the fitted rule never divides by zero.
inline constexpr double kMinContinuationSeconds = 1e-6;

// Regression of the squared standard-ABC weight (l * prior/proposal)^2
// on the chosen decision statistics. max_points > 0 thins the stored
// points by a deterministic stride; 0 keeps every record.
NwRegressor fit_squared_weight_regressor(
    const std::vector<TrainingRecord>& records,
    std::span<const std::size_t> stat_subset, double bandwidth,
    std::size_t max_points = 0);

// Regression of the continuation-stage time on the decision statistics.
NwRegressor fit_continuation_time_regressor(
    const std::vector<TrainingRecord>& records,
    std::span<const std::size_t> stat_subset, double bandwidth,
    std::size_t max_points = 0);

// Mean per-iteration CPU time under per-record continuation
// probabilities: M^-1 [sum t1_i + sum alpha_i t2_i].
double expected_iteration_time(const std::vector<TrainingRecord>& records,
                               std::span<const double> alphas);

// Mean squared lazy weight under per-record continuation probabilities:
// M^-1 sum l_i^2 alpha_i^-1 (prior_i / proposal_i)^2.
double expected_squared_weight(const std::vector<TrainingRecord>& records,
                               std::span<const double> alphas);

// Efficiency of the given continuation probabilities relative to never
// stopping, estimated from training data as
// [E(w^2) E(T)]_always-one / [E(w^2) E(T)]_alpha. Exactly 1 when every
// alpha is 1.
double estimated_relative_efficiency(const std::vector<TrainingRecord>& records,
                                     std::span<const double> alphas);

struct LambdaChoice {
  double lambda = 0.0;
  double efficiency = 1.0;
};

// Maximizes estimated_relative_efficiency over the trade-off scale of
// the fitted stopping rule: a 50-point logarithmic grid spanning
// [everything floored, nothing stopped], refined by golden-section
// search on the best bracket. A flat objective returns the
// nothing-stopped end.
LambdaChoice optimize_lambda(const std::vector<TrainingRecord>& records,
                             const NwRegressor& squared_weight_regressor,
                             const NwRegressor& continuation_time_regressor,
                             std::span<const std::size_t> stat_subset,
                             double alpha_min);

struct TuningResult {
  NwRegressor squared_weight_regressor;
  NwRegressor continuation_time_regressor;
  double lambda = 0.0;
  std::vector<std::size_t> stat_subset;
  double estimated_relative_efficiency = 1.0;
  double nw_bandwidth = 0.0;
  double alpha_min = ContinuationPolicy::kDefaultAlphaMin;
};

// Greedy backward elimination over candidate decision statistics:
// starting from the full set, repeatedly drop the single statistic
// whose removal most improves the re-optimized efficiency estimate;
// stop when no removal improves. Ties drop the higher index.
TuningResult backward_select(const std::vector<TrainingRecord>& records,
                             std::span<const std::size_t> candidate_stats,
                             double nw_bandwidth, double alpha_min,
                             std::size_t max_points = 0);

// The stopping rule described by a tuning result.
ContinuationPolicy make_policy(const TuningResult& result);

}  // namespace lazyabc
