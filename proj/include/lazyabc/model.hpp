#pragma once

#include <any>

#include "lazyabc/common.hpp"

namespace lazyabc {

// Parameter distribution usable as a prior or as an importance proposal.
class Distribution {
 public:
  virtual ~Distribution() = default;
  virtual std::size_t dim() const = 0;
  virtual ParamVector sample(Rng& rng) const = 0;
  virtual double density(const ParamVector& theta) const = 0;
};

// Output of the initial simulation stage: an opaque payload holding
// whatever the model needs to resume the simulation, plus the decision
// statistics a stopping rule is allowed to look at.
struct InitialState {
  std::any resume_payload;
  std::vector<double> decision_stats;
};

// Two-stage simulator contract. Running both stages back to back must
// define the same data distribution as the model's full simulator; the
// continuation stage is invoked at most once per InitialState and may
// consume its payload. Implementations must be pure functions of
// (theta, rng state) so runs are reproducible and thread-safe.
class TwoStageModel {
 public:
  virtual ~TwoStageModel() = default;

  virtual std::size_t param_dim() const = 0;
  virtual std::size_t summary_dim() const = 0;
  virtual std::size_t decision_stat_dim() const = 0;

  virtual const Distribution& prior() const = 0;

  virtual InitialState simulate_initial(const ParamVector& theta,
                                        Rng& rng) const = 0;
  virtual SummaryVector simulate_continuation(const ParamVector& theta,
                                              InitialState& state,
                                              Rng& rng) const = 0;

  virtual const SummaryVector& observed_summary() const = 0;
};

}  // namespace lazyabc
