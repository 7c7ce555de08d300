#pragma once

#include <array>

#include "lazyabc/abc.hpp"
#include "lazyabc/distributions.hpp"
#include "lazyabc/model.hpp"

namespace lazyabc {

// Years-by-locations data matrix, row major.
struct YearlyData {
  std::size_t n_years = 0;
  std::size_t n_locations = 0;
  std::vector<double> values;

  double at(std::size_t t, std::size_t d) const {
    return values[t * n_locations + d];
  }
};

using Triple = std::array<int, 3>;

std::vector<Triple> all_triples(int n_locations);
std::vector<Triple> triples_within(std::span<const int> locations);

// Mean over years of the pairwise absolute differences within one
// location triple. `work` repeats the accumulation over rotated year
// orders: the summed terms are identical, so the value is independent
// of `work` up to summation order, while the cost scales linearly —
// this stands in for the expensive per-triple coefficients of the real
// application.
double triple_coefficient(const YearlyData& data, const Triple& triple,
                          int work = 1);

// Coefficients for every triple in the set, sorted ascending so the
// summary does not depend on location labelling within the set.
SummaryVector triple_summary(const YearlyData& data,
                             std::span<const Triple> triples, int work = 1);

// Distance between the subset-triple summary of `data` and the
// corresponding summary of the observed data. Needs at least three
// locations in the subset.
double estimated_distance(const YearlyData& data, std::span<const int> subset,
                          const SummaryVector& observed_subset_summary,
                          const DistanceSpec& spec, int work = 1);

// Synthetic two-stage benchmark with the cost anatomy of a spatial
// summary-statistics analysis: generating data is cheap, the full
// summary needs a coefficient for every one of the C(D,3) location
// triples, and a subset of locations yields a cheap estimate of the
// final distance. Parameters (c, nu) control a powered-exponential
// correlation over fixed locations; data are yearly draws from the
// resulting Gaussian field.
struct TripleSummaryConfig {
  int n_years = 30;
  int n_locations = 12;
  std::vector<int> subset;  // defaults to 5 spread-out locations
  double c_min = 0.2, c_max = 3.0;
  double nu_min = 0.5, nu_max = 2.0;
  int summary_work = 40;
  DistanceSpec distance;  // used for the estimated distance
  // Observed data; generated from (observed_c, observed_nu,
  // observed_seed) when left empty.
  std::vector<double> observed;  // row major, n_years x n_locations
  double observed_c = 1.0;
  double observed_nu = 1.0;
  std::uint64_t observed_seed = 20140821;
};

class TripleSummaryModel final : public TwoStageModel {
 public:
  explicit TripleSummaryModel(TripleSummaryConfig cfg = {});

  std::size_t param_dim() const override { return 2; }
  std::size_t summary_dim() const override { return full_triples_.size(); }
  // Decision statistics: [0] estimated distance from the location
  // subset, [1] absolute gap of the grand mean from the observed one.
  std::size_t decision_stat_dim() const override { return 2; }
  const Distribution& prior() const override { return prior_; }

  InitialState simulate_initial(const ParamVector& theta,
                                Rng& rng) const override;
  SummaryVector simulate_continuation(const ParamVector& theta,
                                      InitialState& state,
                                      Rng& rng) const override;
  const SummaryVector& observed_summary() const override {
    return observed_summary_;
  }

  YearlyData generate_data(const ParamVector& theta, Rng& rng) const;

  const TripleSummaryConfig& config() const { return cfg_; }
  const YearlyData& observed_data() const { return observed_; }
  const SummaryVector& observed_subset_summary() const {
    return observed_subset_summary_;
  }

  // Fixed location coordinates on the unit square (low-discrepancy
  // sequence, so any prefix is reasonably spread out).
  static std::vector<std::array<double, 2>> location_grid(int n_locations);
  static std::vector<int> default_subset(int n_locations);

 private:
  TripleSummaryConfig cfg_;
  UniformBoxDistribution prior_;
  std::vector<double> pairwise_distance_;  // n_locations^2, row major
  std::vector<Triple> full_triples_;
  std::vector<Triple> subset_triples_;
  std::vector<Triple> remaining_triples_;
  YearlyData observed_;
  SummaryVector observed_summary_;
  SummaryVector observed_subset_summary_;
  double observed_grand_mean_ = 0.0;
};

}  // namespace lazyabc
