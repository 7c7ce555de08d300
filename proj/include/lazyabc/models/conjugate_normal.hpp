#pragma once

#include "lazyabc/abc.hpp"
#include "lazyabc/distributions.hpp"
#include "lazyabc/model.hpp"

namespace lazyabc {

// Normal-location benchmark with a closed-form target: theta has a
// normal prior, observations are iid N(theta, 1), and the summary is
// the sample mean. The initial stage simulates the first n_initial
// observations; the decision statistic is the absolute gap between
// their partial mean and the observed summary.
struct ConjugateNormalConfig {
  double prior_mean = 0.0;
  double prior_sd = 2.0;
  int n_obs = 20;
  int n_initial = 5;
  // Observed data; generated from (observed_theta, observed_seed) when
  // left empty.
  std::vector<double> observed;
  double observed_theta = 1.0;
  std::uint64_t observed_seed = 20140820;
  // Fault injection for harness tests: probability that the initial
  // stage throws SimulationError.
  double fail_rate = 0.0;
};

// Parameters of the target the ABC estimators converge to under a
// normal kernel, plus the normalizing constant the mean weight targets.
struct AbcPosterior {
  double mean = 0.0;
  double sd = 0.0;
  double z = 0.0;
};

class ConjugateNormalModel final : public TwoStageModel {
 public:
  static constexpr double kObsNoiseSd = 1.0;

  explicit ConjugateNormalModel(ConjugateNormalConfig cfg = {});

  std::size_t param_dim() const override { return 1; }
  std::size_t summary_dim() const override { return 1; }
  std::size_t decision_stat_dim() const override { return 1; }
  const Distribution& prior() const override { return prior_; }

  InitialState simulate_initial(const ParamVector& theta,
                                Rng& rng) const override;
  SummaryVector simulate_continuation(const ParamVector& theta,
                                      InitialState& state,
                                      Rng& rng) const override;
  const SummaryVector& observed_summary() const override {
    return observed_summary_;
  }

  // Exact posterior mean/sd and normalizing constant under the normal
  // kernel: convolving the Gaussian summary likelihood with the kernel
  // inflates the summary noise variance by h^2/2. Only defined for the
  // normal kernel; anything else throws UnsupportedOracleError.
  AbcPosterior abc_posterior(const AbcConfig& cfg) const;

  const ConjugateNormalConfig& config() const { return cfg_; }

 private:
  ConjugateNormalConfig cfg_;
  NormalDistribution prior_;
  SummaryVector observed_summary_;
};

}  // namespace lazyabc
