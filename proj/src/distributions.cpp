#include "lazyabc/distributions.hpp"

#include <cmath>
#include <numbers>

namespace lazyabc {

NormalDistribution::NormalDistribution(std::vector<double> means,
                                       std::vector<double> sds)
    : means_(std::move(means)), sds_(std::move(sds)) {
  if (means_.empty() || means_.size() != sds_.size()) {
    throw ConfigError("normal distribution: means/sds must be non-empty and equal length");
  }
  for (double s : sds_) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw ConfigError("normal distribution: sds must be positive and finite");
    }
  }
}

ParamVector NormalDistribution::sample(Rng& rng) const {
  ParamVector out(means_.size());
  for (std::size_t i = 0; i < means_.size(); ++i) {
    std::normal_distribution<double> nd(means_[i], sds_[i]);
    out[i] = nd(rng);
  }
  return out;
}

double NormalDistribution::density(const ParamVector& theta) const {
  if (theta.size() != means_.size()) {
    throw std::invalid_argument("normal density: dimension mismatch");
  }
  double log_pdf = 0.0;
  for (std::size_t i = 0; i < means_.size(); ++i) {
    const double z = (theta[i] - means_[i]) / sds_[i];
    log_pdf += -0.5 * z * z - std::log(sds_[i]) -
               0.5 * std::log(2.0 * std::numbers::pi);
  }
  return std::exp(log_pdf);
}

UniformBoxDistribution::UniformBoxDistribution(std::vector<double> lower,
                                               std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty() || lower_.size() != upper_.size()) {
    throw ConfigError("uniform box: lower/upper must be non-empty and equal length");
  }
  double log_volume = 0.0;
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!(upper_[i] > lower_[i])) {
      throw ConfigError("uniform box: upper bound must exceed lower bound");
    }
    log_volume += std::log(upper_[i] - lower_[i]);
  }
  box_density_ = std::exp(-log_volume);
}

ParamVector UniformBoxDistribution::sample(Rng& rng) const {
  ParamVector out(lower_.size());
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    std::uniform_real_distribution<double> ud(lower_[i], upper_[i]);
    out[i] = ud(rng);
  }
  return out;
}

double UniformBoxDistribution::density(const ParamVector& theta) const {
  if (theta.size() != lower_.size()) {
    throw std::invalid_argument("uniform box density: dimension mismatch");
  }
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (theta[i] < lower_[i] || theta[i] > upper_[i]) {
      return 0.0;
    }
  }
  return box_density_;
}

}  // namespace lazyabc
