#pragma once

#include <cstdint>

#include "lazyabc/abc.hpp"
#include "lazyabc/model.hpp"
#include "lazyabc/nw_regressor.hpp"

namespace lazyabc {

// Probability of running the continuation stage, as a function of the
// decision statistics produced by the initial stage. Emitted values are
// always in [alpha_min, 1]: the floor keeps the reweighting in
// lazy_weight well defined even where the fitted regressors predict a
// worthless draw.
class ContinuationPolicy {
 public:
  enum class Mode { AlwaysOne, Constant, Fitted };

  static constexpr double kDefaultAlphaMin = 1e-3;

  static ContinuationPolicy always_one();
  static ContinuationPolicy constant(double a);
  static ContinuationPolicy fitted(NwRegressor squared_weight_regressor,
                                   NwRegressor continuation_time_regressor,
                                   double lambda,
                                   std::vector<std::size_t> stat_subset,
                                   double alpha_min = kDefaultAlphaMin);

  double continuation_prob(std::span<const double> decision_stats) const;

  Mode mode() const { return mode_; }
  double alpha_min() const { return alpha_min_; }
  double lambda() const { return lambda_; }
  double constant_value() const { return constant_; }
  const std::vector<std::size_t>& stat_subset() const { return stat_subset_; }
  const NwRegressor& squared_weight_regressor() const { return gamma_reg_; }
  const NwRegressor& continuation_time_regressor() const { return t2_reg_; }

  // The fitted rule with a different trade-off scale, everything else
  // reused.
  ContinuationPolicy with_lambda(double lambda) const;

 private:
  ContinuationPolicy() = default;

  Mode mode_ = Mode::AlwaysOne;
  double constant_ = 1.0;
  double lambda_ = 0.0;
  double alpha_min_ = kDefaultAlphaMin;
  std::vector<std::size_t> stat_subset_;
  NwRegressor gamma_reg_;
  NwRegressor t2_reg_;
};

// Weight contribution of one lazy draw: l / a * prior / proposal if the
// simulation was continued, 0 if it was stopped. `l` is the raw kernel
// likelihood; the 1/a factor undoes the survivorship bias introduced by
// the stopping rule.
double lazy_weight(double l, double a, double prior_density,
                   double proposal_density, bool continued);

struct EngineOptions {
  std::size_t workers = 1;        // 0 = hardware concurrency
  std::uint64_t start_index = 0;  // global index of the first iteration
};

// Standard ABC importance sampling: N iterations of propose, simulate
// both stages, weight by K[d/h] * prior/proposal. Simulator failures
// are recorded on the draw and the run continues; if more than half of
// all iterations fail the run aborts with TooManyFailuresError.
std::vector<WeightedDraw> run_standard_abc(const TwoStageModel& model,
                                           const Distribution& proposal,
                                           const AbcConfig& cfg,
                                           const EngineOptions& opt = {});

// Lazy ABC: after the initial stage, continue with probability
// a = policy(decision stats) and inflate surviving kernel likelihoods
// by 1/a; stopped draws get weight 0. Targets the same distribution as
// run_standard_abc for any valid policy. An exact continuation
// probability of 1 consumes no stopping randomness, so the always-one
// policy reproduces run_standard_abc bit for bit at the same seed.
std::vector<WeightedDraw> run_lazy_abc(const TwoStageModel& model,
                                       const ContinuationPolicy& policy,
                                       const Distribution& proposal,
                                       const AbcConfig& cfg,
                                       const EngineOptions& opt = {});

}  // namespace lazyabc
