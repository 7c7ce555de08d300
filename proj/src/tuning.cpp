#include "lazyabc/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lazyabc/parallel.hpp"
#include "iteration.hpp"

namespace lazyabc {

namespace {

std::vector<std::vector<double>> subset_columns(
    const std::vector<TrainingRecord>& records,
    std::span<const std::size_t> stat_subset) {
  if (stat_subset.empty()) {
    throw std::invalid_argument("stat subset must not be empty");
  }
  std::vector<std::vector<double>> rows;
  rows.reserve(records.size());
  for (const auto& r : records) {
    std::vector<double> row;
    row.reserve(stat_subset.size());
    for (std::size_t idx : stat_subset) {
      if (idx >= r.phi.size()) {
        throw std::invalid_argument("stat subset index out of range");
      }
      row.push_back(r.phi[idx]);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Deterministic stride thinning: every k-th element, starting at 0.
template <typename T>
std::vector<T> thin(std::vector<T> items, std::size_t max_points) {
  if (max_points == 0 || items.size() <= max_points) {
    return items;
  }
  const std::size_t stride = (items.size() + max_points - 1) / max_points;
  std::vector<T> out;
  out.reserve(items.size() / stride + 1);
  for (std::size_t i = 0; i < items.size(); i += stride) {
    out.push_back(std::move(items[i]));
  }
  return out;
}

NwRegressor fit_regressor(const std::vector<TrainingRecord>& records,
                          std::span<const std::size_t> stat_subset,
                          double bandwidth, std::size_t max_points,
                          std::vector<double> responses) {
  if (records.empty()) {
    throw std::invalid_argument("regressor fit needs at least one record");
  }
  auto points = thin(subset_columns(records, stat_subset), max_points);
  responses = thin(std::move(responses), max_points);
  return NwRegressor(points, std::move(responses), bandwidth);
}

void check_alphas(const std::vector<TrainingRecord>& records,
                  std::span<const double> alphas) {
  if (records.size() != alphas.size()) {
    throw std::invalid_argument("records/alphas length mismatch");
  }
  for (double a : alphas) {
    if (!(a > 0.0) || a > 1.0) {
      throw std::invalid_argument("alphas must lie in (0, 1]");
    }
  }
}

// Continuation probabilities the fitted rule would emit at each
// training record, parameterized by sqrt(gamma/t2) precomputed once.
std::vector<double> alphas_for_lambda(std::span<const double> rho,
                                      double lambda, double alpha_min) {
  std::vector<double> alphas(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double a = std::min(1.0, lambda * rho[i]);
    alphas[i] = std::min(1.0, std::max(a, alpha_min));
  }
  return alphas;
}

}  // namespace

TrainingCollection collect_training(const TwoStageModel& model,
                                    const Distribution& proposal,
                                    std::size_t m, const AbcConfig& cfg,
                                    const EngineOptions& opt) {
  if (m < 2) {
    throw ConfigError("training size must be at least 2");
  }
  AbcConfig train_cfg = cfg;
  train_cfg.n_draws = m;
  validate(train_cfg);
  if (proposal.dim() != model.param_dim()) {
    throw ConfigError("proposal dimension does not match the model");
  }

  std::vector<detail::IterationResult> results(m);
  detail::FailureTracker tracker(m);
  parallel_for(m, opt.workers, [&](std::size_t i) {
    if (tracker.should_abort()) {
      return;
    }
    results[i] = detail::simulate_iteration(model, nullptr, proposal, train_cfg,
                                            opt.start_index + i);
    if (results[i].draw.failed) {
      tracker.record_failure();
    }
  });
  if (tracker.should_abort()) {
    throw TooManyFailuresError("more than half of the training simulations failed");
  }

  TrainingCollection out;
  out.records.reserve(m);
  out.draws.reserve(m);
  for (auto& r : results) {
    if (!r.draw.failed) {
      TrainingRecord rec;
      rec.theta = r.draw.theta;
      rec.phi = std::move(r.decision_stats);
      rec.l_abc = r.draw.l_abc;
      rec.t1_seconds = r.draw.t1_seconds;
      rec.t2_seconds = r.draw.t2_seconds;
      rec.prior_density = r.prior_density;
      rec.proposal_density = r.proposal_density;
      rec.seed_index = r.draw.seed_index;
      out.records.push_back(std::move(rec));
    }
    out.draws.push_back(std::move(r.draw));
  }
  return out;
}

NwRegressor fit_squared_weight_regressor(
    const std::vector<TrainingRecord>& records,
    std::span<const std::size_t> stat_subset, double bandwidth,
    std::size_t max_points) {
  std::vector<double> responses;
  responses.reserve(records.size());
  for (const auto& r : records) {
    const double w = importance_weight(r.l_abc, r.prior_density,
                                       r.proposal_density);
    responses.push_back(w * w);
  }
  return fit_regressor(records, stat_subset, bandwidth, max_points,
                       std::move(responses));
}

NwRegressor fit_continuation_time_regressor(
    const std::vector<TrainingRecord>& records,
    std::span<const std::size_t> stat_subset, double bandwidth,
    std::size_t max_points) {
  std::vector<double> responses;
  responses.reserve(records.size());
  for (const auto& r : records) {
    responses.push_back(std::max(r.t2_seconds, kMinContinuationSeconds));
  }
  return fit_regressor(records, stat_subset, bandwidth, max_points,
                       std::move(responses));
}

double expected_iteration_time(const std::vector<TrainingRecord>& records,
                               std::span<const double> alphas) {
  check_alphas(records, alphas);
  if (records.empty()) {
    throw std::invalid_argument("expected_iteration_time: no records");
  }
  double sum_t1 = 0.0;
  double sum_alpha_t2 = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    sum_t1 += records[i].t1_seconds;
    sum_alpha_t2 += alphas[i] * records[i].t2_seconds;
  }
  return (sum_t1 + sum_alpha_t2) / static_cast<double>(records.size());
}

double expected_squared_weight(const std::vector<TrainingRecord>& records,
                               std::span<const double> alphas) {
  check_alphas(records, alphas);
  if (records.empty()) {
    throw std::invalid_argument("expected_squared_weight: no records");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const double w = r.l_abc * r.prior_density / r.proposal_density;
    acc += w * w / alphas[i];
  }
  return acc / static_cast<double>(records.size());
}

double estimated_relative_efficiency(
    const std::vector<TrainingRecord>& records,
    std::span<const double> alphas) {
  const std::vector<double> ones(records.size(), 1.0);
  const double baseline =
      expected_squared_weight(records, ones) * expected_iteration_time(records, ones);
  const double proposed =
      expected_squared_weight(records, alphas) * expected_iteration_time(records, alphas);
  if (!(proposed > 0.0)) {
    throw DegenerateSampleError(
        "estimated_relative_efficiency: zero squared-weight estimate");
  }
  return baseline / proposed;
}

LambdaChoice optimize_lambda(const std::vector<TrainingRecord>& records,
                             const NwRegressor& squared_weight_regressor,
                             const NwRegressor& continuation_time_regressor,
                             std::span<const std::size_t> stat_subset,
                             double alpha_min) {
  if (!(alpha_min > 0.0) || alpha_min > 1.0) {
    throw PolicyError("alpha_min must be in (0, 1]");
  }
  const auto queries = subset_columns(records, stat_subset);
  std::vector<double> rho(records.size());
  double rho_max = 0.0;
  double rho_min_pos = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const double gamma = squared_weight_regressor.predict(queries[i]);
    const double t2 = continuation_time_regressor.predict(queries[i]);
    if (!(t2 > 0.0)) {
      throw PolicyError("continuation-time regressor returned a non-positive time");
    }
    rho[i] = std::sqrt(gamma / t2);
    rho_max = std::max(rho_max, rho[i]);
    if (rho[i] > 0.0) {
      rho_min_pos = std::min(rho_min_pos, rho[i]);
    }
  }
  if (rho_max == 0.0) {
    // Degenerate: the rule floors every draw regardless of lambda.
    return {1.0, 1.0};
  }

  const double lambda_lo = alpha_min / rho_max;  // everything at the floor
  // Smallest scale with alpha == 1 at every training point; padded so
  // lambda_hi * rho cannot round below 1.
  const double lambda_hi = (1.0 + 1e-9) / rho_min_pos;

  auto objective = [&](double lambda) {
    const auto alphas = alphas_for_lambda(rho, lambda, alpha_min);
    return estimated_relative_efficiency(records, alphas);
  };

  LambdaChoice best{lambda_hi, objective(lambda_hi)};
  auto consider = [&](double lambda, double eff) {
    if (eff > best.efficiency ||
        (eff == best.efficiency && lambda > best.lambda)) {
      best = {lambda, eff};
    }
  };

  constexpr int kGridPoints = 50;
  std::vector<double> grid(kGridPoints);
  std::vector<double> grid_eff(kGridPoints);
  const double log_lo = std::log(lambda_lo);
  const double log_hi = std::log(lambda_hi);
  double flat_min = std::numeric_limits<double>::infinity();
  double flat_max = -std::numeric_limits<double>::infinity();
  int best_k = 0;
  for (int k = 0; k < kGridPoints; ++k) {
    const double t = static_cast<double>(k) / (kGridPoints - 1);
    grid[k] = std::exp(log_lo + t * (log_hi - log_lo));
    grid_eff[k] = objective(grid[k]);
    flat_min = std::min(flat_min, grid_eff[k]);
    flat_max = std::max(flat_max, grid_eff[k]);
    if (grid_eff[k] >= grid_eff[best_k]) {  // >= prefers larger lambda on ties
      best_k = k;
    }
  }
  if (flat_max - flat_min <= 1e-12 * std::max(1.0, std::abs(flat_max))) {
    return {lambda_hi, objective(lambda_hi)};
  }
  for (int k = 0; k < kGridPoints; ++k) {
    consider(grid[k], grid_eff[k]);
  }

  // Golden-section refinement on the log-lambda bracket around the best
  // grid point.
  const double bracket_lo = std::log(grid[std::max(0, best_k - 1)]);
  const double bracket_hi =
      std::log(grid[std::min(kGridPoints - 1, best_k + 1)]);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = bracket_lo;
  double b = bracket_hi;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = objective(std::exp(c));
  double fd = objective(std::exp(d));
  consider(std::exp(c), fc);
  consider(std::exp(d), fd);
  for (int iter = 0; iter < 64 && (b - a) > 1e-12; ++iter) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = objective(std::exp(c));
      consider(std::exp(c), fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = objective(std::exp(d));
      consider(std::exp(d), fd);
    }
  }
  return best;
}

TuningResult backward_select(const std::vector<TrainingRecord>& records,
                             std::span<const std::size_t> candidate_stats,
                             double nw_bandwidth, double alpha_min,
                             std::size_t max_points) {
  if (candidate_stats.empty()) {
    throw std::invalid_argument("backward_select: needs at least one candidate");
  }

  struct Fit {
    NwRegressor gamma;
    NwRegressor t2;
    LambdaChoice choice;
  };
  auto evaluate = [&](const std::vector<std::size_t>& subset) {
    Fit fit;
    fit.gamma = fit_squared_weight_regressor(records, subset, nw_bandwidth,
                                             max_points);
    fit.t2 = fit_continuation_time_regressor(records, subset, nw_bandwidth,
                                             max_points);
    fit.choice = optimize_lambda(records, fit.gamma, fit.t2, subset, alpha_min);
    return fit;
  };

  std::vector<std::size_t> current(candidate_stats.begin(),
                                   candidate_stats.end());
  Fit current_fit = evaluate(current);

  while (current.size() > 1) {
    bool improved = false;
    std::vector<std::size_t> best_subset;
    Fit best_fit;
    // Scanning removals from the highest candidate index down makes
    // ties drop the higher index.
    for (std::size_t pos = current.size(); pos-- > 0;) {
      std::vector<std::size_t> trial = current;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(pos));
      Fit fit = evaluate(trial);
      if (fit.choice.efficiency > current_fit.choice.efficiency &&
          (!improved || fit.choice.efficiency > best_fit.choice.efficiency)) {
        improved = true;
        best_subset = std::move(trial);
        best_fit = std::move(fit);
      }
    }
    if (!improved) {
      break;
    }
    current = std::move(best_subset);
    current_fit = std::move(best_fit);
  }

  TuningResult result;
  result.squared_weight_regressor = std::move(current_fit.gamma);
  result.continuation_time_regressor = std::move(current_fit.t2);
  result.lambda = current_fit.choice.lambda;
  result.stat_subset = std::move(current);
  result.estimated_relative_efficiency = current_fit.choice.efficiency;
  result.nw_bandwidth = nw_bandwidth;
  result.alpha_min = alpha_min;
  return result;
}

ContinuationPolicy make_policy(const TuningResult& result) {
  return ContinuationPolicy::fitted(result.squared_weight_regressor,
                                    result.continuation_time_regressor,
                                    result.lambda, result.stat_subset,
                                    result.alpha_min);
}

}  // namespace lazyabc
