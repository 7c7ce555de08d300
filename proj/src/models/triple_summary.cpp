#include "lazyabc/models/triple_summary.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace lazyabc {

namespace {

struct ResumeData {
  YearlyData data;
  std::vector<double> subset_coefficients;  // aligned with subset triples
};

// Dense Cholesky of a symmetric positive-definite matrix, lower factor.
std::vector<double> cholesky(std::size_t n, const std::vector<double>& a) {
  std::vector<double> l(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double acc = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) {
        acc -= l[i * n + k] * l[j * n + k];
      }
      if (i == j) {
        if (!(acc > 0.0)) {
          throw SimulationError("correlation matrix is not positive definite");
        }
        l[i * n + i] = std::sqrt(acc);
      } else {
        l[i * n + j] = acc / l[j * n + j];
      }
    }
  }
  return l;
}

double grand_mean(const YearlyData& d) {
  double acc = 0.0;
  for (double v : d.values) {
    acc += v;
  }
  return acc / static_cast<double>(d.values.size());
}

}  // namespace

std::vector<Triple> all_triples(int n_locations) {
  std::vector<Triple> out;
  for (int a = 0; a < n_locations; ++a) {
    for (int b = a + 1; b < n_locations; ++b) {
      for (int c = b + 1; c < n_locations; ++c) {
        out.push_back({a, b, c});
      }
    }
  }
  return out;
}

std::vector<Triple> triples_within(std::span<const int> locations) {
  std::vector<int> sorted(locations.begin(), locations.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<Triple> out;
  const int n = static_cast<int>(sorted.size());
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (int c = b + 1; c < n; ++c) {
        out.push_back({sorted[a], sorted[b], sorted[c]});
      }
    }
  }
  return out;
}

double triple_coefficient(const YearlyData& data, const Triple& triple,
                          int work) {
  const auto [a, b, c] = triple;
  const auto n = static_cast<int>(data.n_locations);
  if (a < 0 || b < 0 || c < 0 || a >= n || b >= n || c >= n) {
    throw std::invalid_argument("triple indices out of range");
  }
  if (work < 1) {
    throw std::invalid_argument("work factor must be at least 1");
  }
  const std::size_t years = data.n_years;
  double acc = 0.0;
  for (int r = 0; r < work; ++r) {
    const std::size_t offset = (static_cast<std::size_t>(r) * 7) % years;
    for (std::size_t s = 0; s < years; ++s) {
      std::size_t t = s + offset;
      if (t >= years) {
        t -= years;
      }
      const double ya = data.at(t, static_cast<std::size_t>(a));
      const double yb = data.at(t, static_cast<std::size_t>(b));
      const double yc = data.at(t, static_cast<std::size_t>(c));
      acc += std::abs(ya - yb) + std::abs(yb - yc) + std::abs(ya - yc);
    }
  }
  return acc / (3.0 * static_cast<double>(years) * static_cast<double>(work));
}

SummaryVector triple_summary(const YearlyData& data,
                             std::span<const Triple> triples, int work) {
  if (triples.empty()) {
    throw std::invalid_argument("triple set must not be empty");
  }
  SummaryVector out;
  out.reserve(triples.size());
  for (const auto& t : triples) {
    out.push_back(triple_coefficient(data, t, work));
  }
  std::sort(out.begin(), out.end());
  return out;
}

double estimated_distance(const YearlyData& data, std::span<const int> subset,
                          const SummaryVector& observed_subset_summary,
                          const DistanceSpec& spec, int work) {
  if (subset.size() < 3) {
    throw std::invalid_argument(
        "estimated distance needs at least 3 locations (no triples otherwise)");
  }
  const auto triples = triples_within(subset);
  const SummaryVector summary = triple_summary(data, triples, work);
  return distance_eval(spec, summary, observed_subset_summary);
}

std::vector<std::array<double, 2>> TripleSummaryModel::location_grid(
    int n_locations) {
  // R2 low-discrepancy sequence over the unit square.
  constexpr double kA1 = 0.7548776662466927;
  constexpr double kA2 = 0.5698402909980532;
  std::vector<std::array<double, 2>> out;
  out.reserve(static_cast<std::size_t>(n_locations));
  for (int d = 1; d <= n_locations; ++d) {
    const double x = std::fmod(0.5 + kA1 * d, 1.0);
    const double y = std::fmod(0.5 + kA2 * d, 1.0);
    out.push_back({x, y});
  }
  return out;
}

std::vector<int> TripleSummaryModel::default_subset(int n_locations) {
  const int k = std::min(5, n_locations);
  std::vector<int> subset;
  for (int i = 0; i < k; ++i) {
    const int idx = static_cast<int>(
        std::lround(static_cast<double>(i) * (n_locations - 1) / (k - 1)));
    if (subset.empty() || subset.back() != idx) {
      subset.push_back(idx);
    }
  }
  return subset;
}

TripleSummaryModel::TripleSummaryModel(TripleSummaryConfig cfg)
    : cfg_(std::move(cfg)),
      prior_({cfg_.c_min, cfg_.nu_min}, {cfg_.c_max, cfg_.nu_max}) {
  if (cfg_.n_years < 1 || cfg_.n_locations < 3) {
    throw ConfigError("triple model: need n_years >= 1 and n_locations >= 3");
  }
  if (cfg_.summary_work < 1) {
    throw ConfigError("triple model: summary_work must be at least 1");
  }
  if (!(cfg_.c_min > 0.0) || !(cfg_.nu_min > 0.0) || cfg_.nu_max > 2.0) {
    // nu <= 2 keeps the powered-exponential correlation positive definite.
    throw ConfigError("triple model: require c_min > 0 and 0 < nu <= 2");
  }
  if (cfg_.subset.empty()) {
    cfg_.subset = default_subset(cfg_.n_locations);
  }
  std::set<int> unique(cfg_.subset.begin(), cfg_.subset.end());
  if (unique.size() != cfg_.subset.size() || cfg_.subset.size() < 3 ||
      *unique.begin() < 0 || *unique.rbegin() >= cfg_.n_locations) {
    throw ConfigError("triple model: subset must hold >= 3 distinct valid locations");
  }

  const auto locations = location_grid(cfg_.n_locations);
  const auto n = static_cast<std::size_t>(cfg_.n_locations);
  pairwise_distance_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = locations[i][0] - locations[j][0];
      const double dy = locations[i][1] - locations[j][1];
      pairwise_distance_[i * n + j] = std::sqrt(dx * dx + dy * dy);
    }
  }

  full_triples_ = all_triples(cfg_.n_locations);
  subset_triples_ = triples_within(cfg_.subset);
  std::set<Triple> subset_set(subset_triples_.begin(), subset_triples_.end());
  for (const auto& t : full_triples_) {
    if (!subset_set.contains(t)) {
      remaining_triples_.push_back(t);
    }
  }

  if (cfg_.observed.empty()) {
    Rng rng = iteration_rng(cfg_.observed_seed, 0, StreamPurpose::Observed);
    observed_ = generate_data({cfg_.observed_c, cfg_.observed_nu}, rng);
  } else {
    if (cfg_.observed.size() != static_cast<std::size_t>(cfg_.n_years) * n) {
      throw ConfigError("triple model: observed data must be n_years x n_locations");
    }
    observed_ = {static_cast<std::size_t>(cfg_.n_years), n, cfg_.observed};
  }
  observed_summary_ =
      triple_summary(observed_, full_triples_, cfg_.summary_work);
  observed_subset_summary_ =
      triple_summary(observed_, subset_triples_, cfg_.summary_work);
  observed_grand_mean_ = grand_mean(observed_);
}

YearlyData TripleSummaryModel::generate_data(const ParamVector& theta,
                                             Rng& rng) const {
  const double c = theta.at(0);
  const double nu = theta.at(1);
  if (!(c > 0.0) || !(nu > 0.0) || nu > 2.0) {
    throw SimulationError("triple model: parameters outside the valid range");
  }
  const auto n = static_cast<std::size_t>(cfg_.n_locations);
  std::vector<double> corr(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    corr[i * n + i] = 1.0 + 1e-10;
    for (std::size_t j = 0; j < i; ++j) {
      const double rho =
          std::exp(-std::pow(pairwise_distance_[i * n + j] / c, nu));
      corr[i * n + j] = rho;
      corr[j * n + i] = rho;
    }
  }
  const std::vector<double> chol = cholesky(n, corr);

  YearlyData data;
  data.n_years = static_cast<std::size_t>(cfg_.n_years);
  data.n_locations = n;
  data.values.resize(data.n_years * n);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<double> eps(n);
  for (std::size_t t = 0; t < data.n_years; ++t) {
    for (auto& e : eps) {
      e = nd(rng);
    }
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k <= i; ++k) {
        acc += chol[i * n + k] * eps[k];
      }
      data.values[t * n + i] = acc;
    }
  }
  return data;
}

InitialState TripleSummaryModel::simulate_initial(const ParamVector& theta,
                                                  Rng& rng) const {
  ResumeData resume;
  resume.data = generate_data(theta, rng);

  resume.subset_coefficients.reserve(subset_triples_.size());
  for (const auto& t : subset_triples_) {
    resume.subset_coefficients.push_back(
        triple_coefficient(resume.data, t, cfg_.summary_work));
  }
  SummaryVector subset_summary = resume.subset_coefficients;
  std::sort(subset_summary.begin(), subset_summary.end());
  const double est_dist =
      distance_eval(cfg_.distance, subset_summary, observed_subset_summary_);
  const double mean_gap =
      std::abs(grand_mean(resume.data) - observed_grand_mean_);

  InitialState state;
  state.decision_stats = {est_dist, mean_gap};
  state.resume_payload = std::move(resume);
  return state;
}

SummaryVector TripleSummaryModel::simulate_continuation(const ParamVector&,
                                                        InitialState& state,
                                                        Rng&) const {
  auto* resume = std::any_cast<ResumeData>(&state.resume_payload);
  if (resume == nullptr) {
    throw SimulationError("triple model: foreign resume payload");
  }
  SummaryVector coefficients = std::move(resume->subset_coefficients);
  coefficients.reserve(full_triples_.size());
  for (const auto& t : remaining_triples_) {
    coefficients.push_back(
        triple_coefficient(resume->data, t, cfg_.summary_work));
  }
  std::sort(coefficients.begin(), coefficients.end());
  return coefficients;
}

}  // namespace lazyabc
