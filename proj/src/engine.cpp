#include "lazyabc/engine.hpp"

#include <atomic>
#include <cmath>

#include "lazyabc/parallel.hpp"
#include "lazyabc/timing.hpp"
#include "iteration.hpp"

namespace lazyabc {

ContinuationPolicy ContinuationPolicy::always_one() {
  ContinuationPolicy p;
  p.mode_ = Mode::AlwaysOne;
  return p;
}

ContinuationPolicy ContinuationPolicy::constant(double a) {
  if (!(a > 0.0) || a > 1.0 || !std::isfinite(a)) {
    throw PolicyError("constant continuation probability must be in (0, 1]");
  }
  ContinuationPolicy p;
  p.mode_ = Mode::Constant;
  p.constant_ = a;
  return p;
}

ContinuationPolicy ContinuationPolicy::fitted(
    NwRegressor squared_weight_regressor,
    NwRegressor continuation_time_regressor, double lambda,
    std::vector<std::size_t> stat_subset, double alpha_min) {
  if (!(alpha_min > 0.0) || alpha_min > 1.0) {
    throw PolicyError("alpha_min must be in (0, 1]");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw PolicyError("lambda must be finite and non-negative");
  }
  if (stat_subset.empty()) {
    throw PolicyError("fitted policy needs at least one decision statistic");
  }
  if (squared_weight_regressor.empty() || continuation_time_regressor.empty()) {
    throw PolicyError("fitted policy requires fitted regressors");
  }
  ContinuationPolicy p;
  p.mode_ = Mode::Fitted;
  p.lambda_ = lambda;
  p.alpha_min_ = alpha_min;
  p.stat_subset_ = std::move(stat_subset);
  p.gamma_reg_ = std::move(squared_weight_regressor);
  p.t2_reg_ = std::move(continuation_time_regressor);
  return p;
}

ContinuationPolicy ContinuationPolicy::with_lambda(double lambda) const {
  if (mode_ != Mode::Fitted) {
    throw PolicyError("with_lambda applies to fitted policies only");
  }
  ContinuationPolicy p = *this;
  p.lambda_ = lambda;
  return p;
}

double ContinuationPolicy::continuation_prob(
    std::span<const double> decision_stats) const {
  switch (mode_) {
    case Mode::AlwaysOne:
      return 1.0;
    case Mode::Constant:
      return constant_;
    case Mode::Fitted:
      break;
  }
  std::vector<double> query;
  query.reserve(stat_subset_.size());
  for (std::size_t idx : stat_subset_) {
    if (idx >= decision_stats.size()) {
      throw PolicyError("decision-statistic subset index out of range");
    }
    query.push_back(decision_stats[idx]);
  }
  const double gamma = gamma_reg_.predict(query);
  const double t2 = t2_reg_.predict(query);
  if (!(t2 > 0.0)) {
    throw PolicyError("continuation-time regressor returned a non-positive time");
  }
  const double a = std::min(1.0, lambda_ * std::sqrt(gamma / t2));
  return std::min(1.0, std::max(a, alpha_min_));
}

double lazy_weight(double l, double a, double prior_density,
                   double proposal_density, bool continued) {
  if (!continued) {
    return 0.0;
  }
  if (!(a > 0.0)) {
    throw PolicyError("continuation probability must be positive");
  }
  return importance_weight(l / a, prior_density, proposal_density);
}

namespace detail {

IterationResult simulate_iteration(const TwoStageModel& model,
                                   const ContinuationPolicy* policy,
                                   const Distribution& proposal,
                                   const AbcConfig& cfg, std::uint64_t index) {
  IterationResult result;
  WeightedDraw& draw = result.draw;
  draw.seed_index = index;
  const std::uint64_t seed = cfg.master_seed;
  const double t_start = thread_cpu_seconds();
  try {
    Rng proposal_rng = iteration_rng(seed, index, StreamPurpose::Proposal);
    ParamVector theta = proposal.sample(proposal_rng);
    result.prior_density = model.prior().density(theta);
    result.proposal_density = proposal.density(theta);
    if (!(result.proposal_density > 0.0)) {
      throw SimulationError("proposal density vanished at a proposed point");
    }

    Rng initial_rng = iteration_rng(seed, index, StreamPurpose::InitialStage);
    InitialState state = model.simulate_initial(theta, initial_rng);
    result.decision_stats = state.decision_stats;

    double a = 1.0;
    bool continue_sim = true;
    if (policy != nullptr) {
      a = policy->continuation_prob(state.decision_stats);
      if (a < 1.0) {
        // a == 1 deliberately consumes no randomness, keeping the
        // always-one policy bit-compatible with the standard engine.
        Rng stop_rng = iteration_rng(seed, index, StreamPurpose::StoppingDecision);
        continue_sim =
            std::uniform_real_distribution<double>(0.0, 1.0)(stop_rng) < a;
      }
    }
    draw.continuation_prob = a;
    draw.t1_seconds = thread_cpu_seconds() - t_start;

    if (!continue_sim) {
      draw.stopped_early = true;
      draw.theta = std::move(theta);
      return result;
    }

    const double t2_start = thread_cpu_seconds();
    Rng continuation_rng =
        iteration_rng(seed, index, StreamPurpose::ContinuationStage);
    const SummaryVector summary =
        model.simulate_continuation(theta, state, continuation_rng);
    const double l_raw = abc_likelihood(summary, model.observed_summary(), cfg);
    draw.l_abc = l_raw / a;
    draw.weight = importance_weight(draw.l_abc, result.prior_density,
                                    result.proposal_density);
    draw.t2_seconds = thread_cpu_seconds() - t2_start;
    draw.theta = std::move(theta);
  } catch (const SimulationError&) {
    draw.failed = true;
    draw.weight = 0.0;
    draw.l_abc = 0.0;
    draw.stopped_early = false;
    const double now = thread_cpu_seconds();
    if (draw.t1_seconds == 0.0) {
      draw.t1_seconds = now - t_start;
    } else {
      draw.t2_seconds = now - t_start - draw.t1_seconds;
    }
  }
  return result;
}

}  // namespace detail

namespace {

std::vector<WeightedDraw> run_engine(const TwoStageModel& model,
                                     const ContinuationPolicy* policy,
                                     const Distribution& proposal,
                                     const AbcConfig& cfg,
                                     const EngineOptions& opt) {
  validate(cfg);
  if (proposal.dim() != model.param_dim()) {
    throw ConfigError("proposal dimension does not match the model");
  }
  const std::size_t n = cfg.n_draws;
  std::vector<WeightedDraw> draws(n);
  detail::FailureTracker tracker(n);
  parallel_for(n, opt.workers, [&](std::size_t i) {
    if (tracker.should_abort()) {
      return;
    }
    detail::IterationResult result = detail::simulate_iteration(
        model, policy, proposal, cfg, opt.start_index + i);
    if (result.draw.failed) {
      tracker.record_failure();
    }
    draws[i] = std::move(result.draw);
  });
  if (tracker.should_abort()) {
    throw TooManyFailuresError("more than half of the simulations failed");
  }
  return draws;
}

}  // namespace

std::vector<WeightedDraw> run_standard_abc(const TwoStageModel& model,
                                           const Distribution& proposal,
                                           const AbcConfig& cfg,
                                           const EngineOptions& opt) {
  return run_engine(model, nullptr, proposal, cfg, opt);
}

std::vector<WeightedDraw> run_lazy_abc(const TwoStageModel& model,
                                       const ContinuationPolicy& policy,
                                       const Distribution& proposal,
                                       const AbcConfig& cfg,
                                       const EngineOptions& opt) {
  return run_engine(model, &policy, proposal, cfg, opt);
}

}  // namespace lazyabc
