#pragma once

#include <span>

#include "lazyabc/common.hpp"

namespace lazyabc {

// Per-coordinate affine map to zero median and unit interquartile range.
// Degenerate coordinates fall back to the full range, then to scale 1,
// so the map is always invertible. Fitting is affine-equivariant, which
// makes downstream kernel regression invariant to rescaling of any
// input coordinate.
class Standardizer {
 public:
  Standardizer() = default;

  static Standardizer fit(const std::vector<std::vector<double>>& rows);
  static Standardizer from_parts(std::vector<double> center,
                                 std::vector<double> scale);

  std::vector<double> apply(std::span<const double> x) const;

  std::size_t dim() const { return center_.size(); }
  const std::vector<double>& center() const { return center_; }
  const std::vector<double>& scale() const { return scale_; }

 private:
  std::vector<double> center_;
  std::vector<double> scale_;
};

// Degree-zero local regression: a Gaussian-kernel weighted average of
// the stored responses, evaluated in standardized input space. The
// prediction is a convex combination of responses, so it stays within
// [min(responses), max(responses)] and is strictly positive whenever
// all responses are.
class NwRegressor {
 public:
  NwRegressor() = default;

  // Fits the standardizer on `points` and stores them standardized.
  NwRegressor(const std::vector<std::vector<double>>& points,
              std::vector<double> responses, double bandwidth);

  static NwRegressor from_parts(Standardizer standardizer,
                                std::vector<std::vector<double>> standardized_points,
                                std::vector<double> responses, double bandwidth);

  // Kernel-weighted average at `query` (raw scale). If every kernel
  // weight underflows to zero the nearest stored point's response is
  // returned instead.
  double predict(std::span<const double> query) const;

  bool empty() const { return points_.empty(); }
  std::size_t size() const { return points_.size(); }
  std::size_t input_dim() const { return standardizer_.dim(); }
  double bandwidth() const { return bandwidth_; }
  bool all_responses_zero() const;

  const Standardizer& standardizer() const { return standardizer_; }
  const std::vector<std::vector<double>>& points() const { return points_; }
  const std::vector<double>& responses() const { return responses_; }

 private:
  Standardizer standardizer_;
  std::vector<std::vector<double>> points_;  // standardized
  std::vector<double> responses_;
  double bandwidth_ = 0.0;
};

}  // namespace lazyabc
