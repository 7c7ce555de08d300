#pragma once

#include "lazyabc/model.hpp"

namespace lazyabc {

// Independent normals, one (mean, sd) pair per coordinate.
class NormalDistribution final : public Distribution {
 public:
  NormalDistribution(std::vector<double> means, std::vector<double> sds);

  std::size_t dim() const override { return means_.size(); }
  ParamVector sample(Rng& rng) const override;
  double density(const ParamVector& theta) const override;

 private:
  std::vector<double> means_;
  std::vector<double> sds_;
};

// Uniform over an axis-aligned box.
class UniformBoxDistribution final : public Distribution {
 public:
  UniformBoxDistribution(std::vector<double> lower, std::vector<double> upper);

  std::size_t dim() const override { return lower_.size(); }
  ParamVector sample(Rng& rng) const override;
  double density(const ParamVector& theta) const override;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
  double box_density_ = 0.0;
};

}  // namespace lazyabc
