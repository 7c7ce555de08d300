#include "lazyabc/models/conjugate_normal.hpp"

#include <cmath>
#include <numeric>

namespace lazyabc {

namespace {

struct PartialSum {
  double sum = 0.0;
};

}  // namespace

ConjugateNormalModel::ConjugateNormalModel(ConjugateNormalConfig cfg)
    : cfg_(std::move(cfg)),
      prior_({cfg_.prior_mean}, {cfg_.prior_sd}) {
  if (cfg_.n_obs < 2 || cfg_.n_initial < 1 || cfg_.n_initial >= cfg_.n_obs) {
    throw ConfigError("conjugate model: need 1 <= n_initial < n_obs, n_obs >= 2");
  }
  if (cfg_.fail_rate < 0.0 || cfg_.fail_rate >= 1.0) {
    throw ConfigError("conjugate model: fail_rate must be in [0, 1)");
  }
  if (cfg_.observed.empty()) {
    Rng rng = iteration_rng(cfg_.observed_seed, 0, StreamPurpose::Observed);
    std::normal_distribution<double> nd(cfg_.observed_theta, kObsNoiseSd);
    cfg_.observed.resize(static_cast<std::size_t>(cfg_.n_obs));
    for (auto& y : cfg_.observed) {
      y = nd(rng);
    }
  } else if (cfg_.observed.size() != static_cast<std::size_t>(cfg_.n_obs)) {
    throw ConfigError("conjugate model: observed data length must equal n_obs");
  }
  const double mean =
      std::accumulate(cfg_.observed.begin(), cfg_.observed.end(), 0.0) /
      static_cast<double>(cfg_.n_obs);
  observed_summary_ = {mean};
}

InitialState ConjugateNormalModel::simulate_initial(const ParamVector& theta,
                                                    Rng& rng) const {
  if (cfg_.fail_rate > 0.0) {
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    if (ud(rng) < cfg_.fail_rate) {
      throw SimulationError("injected simulator failure");
    }
  }
  std::normal_distribution<double> nd(theta.at(0), kObsNoiseSd);
  double sum = 0.0;
  for (int i = 0; i < cfg_.n_initial; ++i) {
    sum += nd(rng);
  }
  InitialState state;
  state.resume_payload = PartialSum{sum};
  const double partial_mean = sum / static_cast<double>(cfg_.n_initial);
  state.decision_stats = {std::abs(partial_mean - observed_summary_[0])};
  return state;
}

SummaryVector ConjugateNormalModel::simulate_continuation(
    const ParamVector& theta, InitialState& state, Rng& rng) const {
  const auto* partial = std::any_cast<PartialSum>(&state.resume_payload);
  if (partial == nullptr) {
    throw SimulationError("conjugate model: foreign resume payload");
  }
  std::normal_distribution<double> nd(theta.at(0), kObsNoiseSd);
  double sum = partial->sum;
  for (int i = cfg_.n_initial; i < cfg_.n_obs; ++i) {
    sum += nd(rng);
  }
  return {sum / static_cast<double>(cfg_.n_obs)};
}

AbcPosterior ConjugateNormalModel::abc_posterior(const AbcConfig& cfg) const {
  if (cfg.kernel.kind != KernelKind::Normal) {
    throw UnsupportedOracleError(
        "closed-form target is only available for the normal kernel");
  }
  if (!(cfg.bandwidth > 0.0)) {
    throw UnsupportedOracleError("closed-form target requires bandwidth > 0");
  }
  const double s_obs = observed_summary_[0];
  const double mu0 = cfg_.prior_mean;
  const double var0 = cfg_.prior_sd * cfg_.prior_sd;
  const double summary_var =
      kObsNoiseSd * kObsNoiseSd / static_cast<double>(cfg_.n_obs);
  // exp(-(d/h)^2) is a Gaussian kernel with variance h^2 / 2.
  const double kernel_var = 0.5 * cfg.bandwidth * cfg.bandwidth;
  const double eff_var = summary_var + kernel_var;

  AbcPosterior post;
  const double precision = 1.0 / var0 + 1.0 / eff_var;
  post.mean = (mu0 / var0 + s_obs / eff_var) / precision;
  post.sd = std::sqrt(1.0 / precision);
  const double gap = s_obs - mu0;
  post.z = std::sqrt(kernel_var / (kernel_var + summary_var)) *
           std::sqrt(eff_var / (var0 + eff_var)) *
           std::exp(-gap * gap / (2.0 * (var0 + eff_var)));
  return post;
}

}  // namespace lazyabc
