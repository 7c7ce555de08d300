#pragma once

#include <cstdint>
#include <span>

#include "lazyabc/common.hpp"

namespace lazyabc {

enum class KernelKind { Uniform, Normal };

// ABC kernel: maps the scaled summary distance to a value in [0, 1].
// The uniform kernel is an accept/reject decision; the normal kernel
// exp(-u^2) has full support, which is what makes regression-based
// tuning workable.
struct KernelSpec {
  KernelKind kind = KernelKind::Normal;
};

enum class DistanceKind { Euclidean, WeightedEuclidean };

struct DistanceSpec {
  DistanceKind kind = DistanceKind::Euclidean;
  std::vector<double> weights;  // per-coordinate, WeightedEuclidean only
};

struct AbcConfig {
  double bandwidth = 1.0;   // h; divides the distance before the kernel
  KernelSpec kernel;
  DistanceSpec distance;
  std::size_t n_draws = 0;  // N
  std::uint64_t master_seed = 1;
};

// Throws ConfigError if the configuration cannot produce a run.
void validate(const AbcConfig& cfg);

// One output draw (theta_i, w_i) plus provenance. For draws that were
// stopped early, weight, l_abc and t2_seconds are all zero. l_abc is
// the realized kernel likelihood, already inflated by 1/a for draws
// that survived a stopping decision, so the identity
// weight == l_abc * prior_density / proposal_density always holds.
struct WeightedDraw {
  ParamVector theta;
  double weight = 0.0;
  double l_abc = 0.0;
  bool stopped_early = false;
  bool failed = false;
  double continuation_prob = 1.0;  // a
  double t1_seconds = 0.0;  // CPU: proposal draw, initial stage, stopping decision
  double t2_seconds = 0.0;  // CPU: continuation stage and weighting
  std::uint64_t seed_index = 0;
};

double kernel_eval(const KernelSpec& kernel, double u);

double distance_eval(const DistanceSpec& spec, std::span<const double> a,
                     std::span<const double> b);

// K[d(simulated, observed) / h]. A bandwidth of zero is accepted only
// when the distance is exactly zero (exact-match mode); otherwise it is
// a configuration error.
double abc_likelihood(const SummaryVector& simulated,
                      const SummaryVector& observed, const AbcConfig& cfg);

// l * prior_density / proposal_density. The proposal must dominate the
// prior: a zero proposal density is rejected.
double importance_weight(double l, double prior_density,
                         double proposal_density);

// N [N^-1 sum w]^2 / [N^-1 sum w^2]; 0 for an all-zero weight vector
// (degenerate sample, flagged in reports rather than thrown).
double effective_sample_size(std::span<const double> weights);

// Self-normalized importance-sampling average of values.
double weighted_mean(std::span<const double> values,
                     std::span<const double> weights);

// Mean weight: the estimate of the normalizing constant.
double normalizing_constant_estimate(std::span<const double> weights);

// Weights of the non-failed draws, in draw order.
std::vector<double> draw_weights(const std::vector<WeightedDraw>& draws);

}  // namespace lazyabc
