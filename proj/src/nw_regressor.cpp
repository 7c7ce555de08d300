#include "lazyabc/nw_regressor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lazyabc {

namespace {

// Linear-interpolation quantile of a sorted vector (the common type-7
// definition: h = (n-1)p).
double quantile_sorted(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) {
    return sorted[0];
  }
  const double h = static_cast<double>(n - 1) * p;
  const auto lo = static_cast<std::size_t>(h);
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

Standardizer Standardizer::fit(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) {
    throw std::invalid_argument("standardizer: no rows");
  }
  const std::size_t d = rows.front().size();
  Standardizer st;
  st.center_.resize(d);
  st.scale_.resize(d);
  std::vector<double> column(rows.size());
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != d) {
        throw std::invalid_argument("standardizer: ragged rows");
      }
      column[i] = rows[i][j];
    }
    std::sort(column.begin(), column.end());
    st.center_[j] = quantile_sorted(column, 0.5);
    double scale = quantile_sorted(column, 0.75) - quantile_sorted(column, 0.25);
    if (scale <= 0.0) {
      scale = column.back() - column.front();
    }
    if (scale <= 0.0) {
      scale = 1.0;
    }
    st.scale_[j] = scale;
  }
  return st;
}

Standardizer Standardizer::from_parts(std::vector<double> center,
                                      std::vector<double> scale) {
  if (center.size() != scale.size()) {
    throw std::invalid_argument("standardizer: center/scale length mismatch");
  }
  for (double s : scale) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("standardizer: scales must be positive");
    }
  }
  Standardizer st;
  st.center_ = std::move(center);
  st.scale_ = std::move(scale);
  return st;
}

std::vector<double> Standardizer::apply(std::span<const double> x) const {
  if (x.size() != center_.size()) {
    throw std::invalid_argument("standardizer: dimension mismatch");
  }
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    out[j] = (x[j] - center_[j]) / scale_[j];
  }
  return out;
}

NwRegressor::NwRegressor(const std::vector<std::vector<double>>& points,
                         std::vector<double> responses, double bandwidth) {
  if (points.size() != responses.size()) {
    throw std::invalid_argument("nw regressor: points/responses length mismatch");
  }
  if (points.empty()) {
    throw std::invalid_argument("nw regressor: needs at least one point");
  }
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw std::invalid_argument("nw regressor: bandwidth must be positive");
  }
  standardizer_ = Standardizer::fit(points);
  points_.reserve(points.size());
  for (const auto& p : points) {
    points_.push_back(standardizer_.apply(p));
  }
  responses_ = std::move(responses);
  bandwidth_ = bandwidth;
}

NwRegressor NwRegressor::from_parts(
    Standardizer standardizer,
    std::vector<std::vector<double>> standardized_points,
    std::vector<double> responses, double bandwidth) {
  if (standardized_points.size() != responses.size() ||
      standardized_points.empty()) {
    throw std::invalid_argument("nw regressor: bad stored parts");
  }
  if (!(bandwidth > 0.0)) {
    throw std::invalid_argument("nw regressor: bandwidth must be positive");
  }
  NwRegressor reg;
  reg.standardizer_ = std::move(standardizer);
  reg.points_ = std::move(standardized_points);
  reg.responses_ = std::move(responses);
  reg.bandwidth_ = bandwidth;
  return reg;
}

double NwRegressor::predict(std::span<const double> query) const {
  if (points_.empty()) {
    throw DegenerateSampleError("nw regressor: empty");
  }
  const std::vector<double> q = standardizer_.apply(query);
  const double inv_two_b2 = 1.0 / (2.0 * bandwidth_ * bandwidth_);
  double numerator = 0.0;
  double denominator = 0.0;
  double best_dist = std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    double d2 = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      const double diff = q[j] - p[j];
      d2 += diff * diff;
    }
    if (d2 < best_dist) {
      best_dist = d2;
      best_index = i;
    }
    const double w = std::exp(-d2 * inv_two_b2);
    numerator += w * responses_[i];
    denominator += w;
  }
  if (denominator > 0.0) {
    return numerator / denominator;
  }
  return responses_[best_index];  // all kernel weights underflowed
}

bool NwRegressor::all_responses_zero() const {
  return std::all_of(responses_.begin(), responses_.end(),
                     [](double r) { return r == 0.0; });
}

}  // namespace lazyabc
