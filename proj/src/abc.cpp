#include "lazyabc/abc.hpp"

#include <cmath>
#include <string>

namespace lazyabc {

void validate(const AbcConfig& cfg) {
  if (cfg.n_draws == 0) {
    throw ConfigError("n_draws must be at least 1");
  }
  if (!std::isfinite(cfg.bandwidth) || cfg.bandwidth < 0.0) {
    throw ConfigError("bandwidth must be finite and non-negative");
  }
  if (cfg.distance.kind == DistanceKind::WeightedEuclidean) {
    if (cfg.distance.weights.empty()) {
      throw ConfigError("weighted_euclidean distance requires weights");
    }
    for (double w : cfg.distance.weights) {
      if (!std::isfinite(w) || w < 0.0) {
        throw ConfigError("distance weights must be finite and non-negative");
      }
    }
  }
}

double kernel_eval(const KernelSpec& kernel, double u) {
  if (!std::isfinite(u) || u < 0.0) {
    throw std::invalid_argument("kernel argument must be finite and non-negative");
  }
  switch (kernel.kind) {
    case KernelKind::Uniform:
      return u <= 1.0 ? 1.0 : 0.0;
    case KernelKind::Normal:
      return std::exp(-u * u);
  }
  throw std::invalid_argument("unknown kernel kind");
}

double distance_eval(const DistanceSpec& spec, std::span<const double> a,
                     std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("distance: dimension mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
  double acc = 0.0;
  switch (spec.kind) {
    case DistanceKind::Euclidean:
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
      }
      break;
    case DistanceKind::WeightedEuclidean:
      if (spec.weights.size() != a.size()) {
        throw std::invalid_argument("distance: weights dimension mismatch");
      }
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += spec.weights[i] * d * d;
      }
      break;
  }
  return std::sqrt(acc);
}

double abc_likelihood(const SummaryVector& simulated,
                      const SummaryVector& observed, const AbcConfig& cfg) {
  const double d = distance_eval(cfg.distance, simulated, observed);
  if (cfg.bandwidth == 0.0) {
    // Exact-match mode: only a zero distance is representable.
    if (d == 0.0) {
      return kernel_eval(cfg.kernel, 0.0);
    }
    throw ConfigError("bandwidth 0 requires an exact summary match");
  }
  return kernel_eval(cfg.kernel, d / cfg.bandwidth);
}

double importance_weight(double l, double prior_density,
                         double proposal_density) {
  if (!(proposal_density > 0.0) || !std::isfinite(proposal_density)) {
    throw std::invalid_argument(
        "proposal density must be positive (proposal must dominate the prior)");
  }
  if (!std::isfinite(l) || l < 0.0 || !std::isfinite(prior_density) ||
      prior_density < 0.0) {
    throw std::invalid_argument("weight inputs must be finite and non-negative");
  }
  return l * prior_density / proposal_density;
}

double effective_sample_size(std::span<const double> weights) {
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double w : weights) {
    sum += w;
    sum_sq += w * w;
  }
  if (sum_sq == 0.0) {
    return 0.0;
  }
  return sum * sum / sum_sq;
}

double weighted_mean(std::span<const double> values,
                     std::span<const double> weights) {
  if (values.size() != weights.size()) {
    throw std::invalid_argument("weighted_mean: length mismatch");
  }
  double acc = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    acc += values[i] * weights[i];
    total += weights[i];
  }
  if (!(total > 0.0)) {
    throw DegenerateSampleError("weighted_mean: total weight is zero");
  }
  return acc / total;
}

double normalizing_constant_estimate(std::span<const double> weights) {
  if (weights.empty()) {
    throw std::invalid_argument("normalizing_constant_estimate: empty sample");
  }
  double sum = 0.0;
  for (double w : weights) {
    sum += w;
  }
  return sum / static_cast<double>(weights.size());
}

std::vector<double> draw_weights(const std::vector<WeightedDraw>& draws) {
  std::vector<double> out;
  out.reserve(draws.size());
  for (const auto& d : draws) {
    if (!d.failed) {
      out.push_back(d.weight);
    }
  }
  return out;
}

}  // namespace lazyabc
