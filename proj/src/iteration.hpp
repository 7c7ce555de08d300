#pragma once

// Internal: the single-iteration core shared by the standard engine,
// the lazy engine, and training collection.

#include <atomic>

#include "lazyabc/engine.hpp"

namespace lazyabc::detail {

struct IterationResult {
  WeightedDraw draw;
  std::vector<double> decision_stats;  // all candidate statistics
  double prior_density = 0.0;
  double proposal_density = 0.0;
};

// One iteration at global index `index`. `policy` may be null, which is
// the standard-ABC path (identical to an always-one policy). Simulator
// failures (SimulationError) are captured on the draw, not rethrown.
IterationResult simulate_iteration(const TwoStageModel& model,
                                   const ContinuationPolicy* policy,
                                   const Distribution& proposal,
                                   const AbcConfig& cfg, std::uint64_t index);

// Tracks failures across workers and trips once more than half of all
// iterations have failed.
class FailureTracker {
 public:
  explicit FailureTracker(std::size_t total) : total_(total) {}

  void record_failure() {
    const std::size_t f = failures_.fetch_add(1, std::memory_order_relaxed) + 1;
    if (2 * f > total_) {
      abort_.store(true, std::memory_order_relaxed);
    }
  }
  bool should_abort() const { return abort_.load(std::memory_order_relaxed); }

 private:
  std::size_t total_;
  std::atomic<std::size_t> failures_{0};
  std::atomic<bool> abort_{false};
};

}  // namespace lazyabc::detail
