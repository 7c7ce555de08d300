#include <doctest.h>

#include <cmath>
#include <random>

#include "lazyabc/models/conjugate_normal.hpp"
#include "lazyabc/tuning.hpp"
#include "test_support.hpp"

using namespace lazyabc;
using namespace lazyabc::testing;

namespace {

std::vector<TrainingRecord> synthetic_records(
    std::size_t m, std::uint64_t seed,
    const std::function<double(std::mt19937_64&)>& phi_gen,
    const std::function<double(double, std::mt19937_64&)>& l_of_phi,
    const std::function<double(double)>& t2_of_phi) {
  std::mt19937_64 rng(seed);
  std::vector<TrainingRecord> records(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto& r = records[i];
    const double phi = phi_gen(rng);
    r.theta = {phi};
    r.phi = {phi};
    r.l_abc = l_of_phi(phi, rng);
    r.t1_seconds = 0.001;
    r.t2_seconds = t2_of_phi(phi);
    r.prior_density = 1.0;
    r.proposal_density = 1.0;
    r.seed_index = i;
  }
  return records;
}

const std::vector<std::size_t> kStat0{0};

}  // namespace

TEST_CASE("nw_predict: single point, symmetry, formula oracle") {
  // A single training point predicts its response everywhere.
  NwRegressor single({{42.0}}, {7.0}, 0.5);
  CHECK(single.predict(std::vector{42.0}) == 7.0);
  CHECK(single.predict(std::vector{-3.0}) == 7.0);
  CHECK(single.predict(std::vector{1e9}) == 7.0);  // underflow fallback

  // Query equidistant from two points averages their responses.
  NwRegressor pair({{0.0}, {2.0}}, {2.0, 4.0}, 0.7);
  CHECK(pair.predict(std::vector{1.0}) == doctest::Approx(3.0).epsilon(1e-12));

  // Five scattered points, checked against an independent
  // implementation at random queries.
  std::vector<std::vector<double>> points{{0.1, -1.0}, {0.7, 0.3}, {-0.2, 2.0},
                                          {1.5, 0.9},  {0.4, -0.6}};
  std::vector<double> responses{1.0, 2.5, 0.3, 4.0, 1.7};
  NwRegressor reg(points, responses, 0.5);
  std::mt19937_64 rng(19);
  std::normal_distribution<double> nd(0.3, 1.2);
  for (int i = 0; i < 10; ++i) {
    std::vector<double> q{nd(rng), nd(rng)};
    const double expected = nw_direct(points, responses, 0.5, q);
    CHECK(reg.predict(q) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("nw_predict stays within the response range") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ud(-5.0, 5.0);
  std::uniform_real_distribution<double> rd(0.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<double>> points;
    std::vector<double> responses;
    for (int i = 0; i < 12; ++i) {
      points.push_back({ud(rng), ud(rng)});
      responses.push_back(rd(rng));
    }
    NwRegressor reg(points, responses, 0.4);
    const auto [mn, mx] = std::minmax_element(responses.begin(), responses.end());
    for (int q = 0; q < 10; ++q) {
      const double p = reg.predict(std::vector{ud(rng), ud(rng)});
      CHECK(p >= *mn - 1e-9);
      CHECK(p <= *mx + 1e-9);
    }
  }
}

TEST_CASE("nw_predict is invariant to affine rescaling of a coordinate") {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> nd;
  std::vector<std::vector<double>> points;
  std::vector<double> responses;
  for (int i = 0; i < 40; ++i) {
    points.push_back({nd(rng), nd(rng)});
    responses.push_back(std::abs(nd(rng)));
  }
  NwRegressor reg(points, responses, 0.5);

  for (const double scale : {3.7, -2.2}) {
    const double shift = 11.0;
    auto rescaled = points;
    for (auto& p : rescaled) {
      p[1] = scale * p[1] + shift;
    }
    NwRegressor reg2(rescaled, responses, 0.5);
    for (int q = 0; q < 20; ++q) {
      std::vector<double> query{nd(rng), nd(rng)};
      std::vector<double> query2{query[0], scale * query[1] + shift};
      CHECK(reg2.predict(query2) ==
            doctest::Approx(reg.predict(query)).epsilon(1e-9));
    }
  }
}

TEST_CASE("fit_squared_weight_regressor uses (l pi/g)^2 responses") {
  // With g = pi the responses are exactly l^2.
  auto records = synthetic_records(
      50, 1, [](std::mt19937_64& r) { return std::uniform_real_distribution<double>(0, 1)(r); },
      [](double phi, std::mt19937_64&) { return phi; },
      [](double) { return 0.01; });
  auto reg = fit_squared_weight_regressor(records, kStat0, 0.5);
  REQUIRE(reg.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(reg.responses()[i] == records[i].l_abc * records[i].l_abc);
  }

  // Constant l = 1 gives a predictor that is 1 everywhere.
  for (auto& r : records) {
    r.l_abc = 1.0;
  }
  auto flat = fit_squared_weight_regressor(records, kStat0, 0.5);
  for (double q : {0.0, 0.3, 0.9, 2.0}) {
    CHECK(flat.predict(std::vector{q}) == doctest::Approx(1.0).epsilon(1e-12));
  }

  // All-zero responses are detectable so callers can warn.
  for (auto& r : records) {
    r.l_abc = 0.0;
  }
  CHECK(fit_squared_weight_regressor(records, kStat0, 0.5).all_responses_zero());
}

TEST_CASE("squared-weight regression is monotone when l equals phi") {
  auto records = synthetic_records(
      400, 2, [](std::mt19937_64& r) { return std::uniform_real_distribution<double>(0, 1)(r); },
      [](double phi, std::mt19937_64&) { return phi; },
      [](double) { return 0.01; });
  auto reg = fit_squared_weight_regressor(records, kStat0, 0.5);

  std::vector<std::vector<double>> points;
  std::vector<double> responses;
  for (const auto& r : records) {
    points.push_back({r.phi[0]});
    responses.push_back(r.l_abc * r.l_abc);
  }
  double prev = -1.0;
  for (int i = 0; i <= 50; ++i) {
    const double q = static_cast<double>(i) / 50.0;
    const double pred = reg.predict(std::vector{q});
    CHECK(pred >= prev - 1e-12);
    CHECK(pred == doctest::Approx(nw_direct(points, responses, 0.5, {q}))
                      .epsilon(1e-12));
    prev = pred;
  }
}

TEST_CASE("fit_continuation_time_regressor floors responses and handles edge sizes") {
  auto records = synthetic_records(
      30, 3, [](std::mt19937_64& r) { return std::normal_distribution<double>()(r); },
      [](double, std::mt19937_64&) { return 0.5; },
      [](double) { return 0.01; });
  auto reg = fit_continuation_time_regressor(records, kStat0, 0.5);
  for (double q : {-2.0, 0.0, 2.0}) {
    CHECK(reg.predict(std::vector{q}) == doctest::Approx(0.01).epsilon(1e-12));
  }

  // Zero recorded times are floored so the optimal-alpha formula can
  // divide by the prediction.
  for (auto& r : records) {
    r.t2_seconds = 0.0;
  }
  auto floored = fit_continuation_time_regressor(records, kStat0, 0.5);
  CHECK(floored.predict(std::vector{0.0}) ==
        doctest::Approx(kMinContinuationSeconds).epsilon(1e-12));

  // A single record yields a constant predictor.
  records.resize(1);
  records[0].t2_seconds = 0.25;
  auto constant = fit_continuation_time_regressor(records, kStat0, 0.5);
  CHECK(constant.predict(std::vector{123.0}) == 0.25);

  // Linear t2, checked against the direct formula.
  auto linear = synthetic_records(
      100, 4, [](std::mt19937_64& r) { return std::uniform_real_distribution<double>(0, 2)(r); },
      [](double, std::mt19937_64&) { return 0.5; },
      [](double phi) { return 0.01 + 0.005 * phi; });
  auto lreg = fit_continuation_time_regressor(linear, kStat0, 0.5);
  std::vector<std::vector<double>> pts;
  std::vector<double> resp;
  for (const auto& r : linear) {
    pts.push_back({r.phi[0]});
    resp.push_back(r.t2_seconds);
  }
  for (double q : {0.1, 0.8, 1.5}) {
    CHECK(lreg.predict(std::vector{q}) ==
          doctest::Approx(nw_direct(pts, resp, 0.5, {q})).epsilon(1e-12));
  }
}

TEST_CASE("expected_iteration_time") {
  std::vector<TrainingRecord> records(2);
  records[0].t1_seconds = 1.0;
  records[0].t2_seconds = 2.0;
  records[1].t1_seconds = 1.0;
  records[1].t2_seconds = 4.0;
  for (auto& r : records) {
    r.l_abc = 0.5;
    r.prior_density = r.proposal_density = 1.0;
  }
  CHECK(expected_iteration_time(records, std::vector{0.5, 0.5}) ==
        doctest::Approx(2.5).epsilon(1e-15));
  CHECK(expected_iteration_time(records, std::vector{1.0, 1.0}) ==
        doctest::Approx(4.0).epsilon(1e-15));
  // alpha -> 0 limit: only the initial stage remains.
  CHECK(expected_iteration_time(records, std::vector{1e-9, 1e-9}) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(expected_iteration_time(records, std::vector{0.5, 1.5}),
                  std::invalid_argument);
}

TEST_CASE("expected_squared_weight") {
  std::vector<TrainingRecord> records(2);
  records[0].l_abc = 1.0;
  records[1].l_abc = 0.0;
  for (auto& r : records) {
    r.t1_seconds = 1.0;
    r.prior_density = r.proposal_density = 1.0;
  }
  CHECK(expected_squared_weight(records, std::vector{0.25, 0.9}) ==
        doctest::Approx(2.0).epsilon(1e-15));
  CHECK(expected_squared_weight(records, std::vector{1.0, 1.0}) ==
        doctest::Approx(0.5).epsilon(1e-15));

  // Halving every alpha doubles the estimate.
  auto records2 = synthetic_records(
      40, 5, [](std::mt19937_64& r) { return std::uniform_real_distribution<double>(0, 1)(r); },
      [](double, std::mt19937_64& r) { return std::uniform_real_distribution<double>(0, 1)(r); },
      [](double) { return 0.01; });
  std::vector<double> alphas(records2.size(), 0.8);
  std::vector<double> halved(records2.size(), 0.4);
  CHECK(expected_squared_weight(records2, halved) ==
        doctest::Approx(2.0 * expected_squared_weight(records2, alphas))
            .epsilon(1e-12));
}

TEST_CASE("estimator monotonicity in alpha") {
  auto records = synthetic_records(
      30, 6, [](std::mt19937_64& r) { return std::uniform_real_distribution<double>(0, 1)(r); },
      [](double, std::mt19937_64& r) { return std::uniform_real_distribution<double>(0, 1)(r); },
      [](double) { return 0.02; });
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ud(0.05, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> alphas(records.size());
    for (auto& a : alphas) {
      a = ud(rng);
    }
    auto bumped = alphas;
    const std::size_t i = trial % records.size();
    bumped[i] = std::min(1.0, alphas[i] * 1.5);
    CHECK(expected_squared_weight(records, bumped) <=
          expected_squared_weight(records, alphas) + 1e-15);
    CHECK(expected_iteration_time(records, bumped) >=
          expected_iteration_time(records, alphas) - 1e-15);
  }
}

TEST_CASE("estimated_relative_efficiency") {
  auto records = synthetic_records(
      60, 8, [](std::mt19937_64& r) { return std::uniform_real_distribution<double>(0, 1)(r); },
      [](double phi, std::mt19937_64&) { return phi < 0.5 ? 1.0 : 0.0; },
      [](double) { return 0.05 ; });
  const std::vector<double> ones(records.size(), 1.0);
  CHECK(estimated_relative_efficiency(records, ones) == 1.0);

  // Records where half the kernel values are zero; flooring alpha on
  // exactly those, with the continuation stage dominating the time
  // tenfold, beats never stopping by a clear margin.
  for (auto& r : records) {
    r.t1_seconds = 0.005;
  }
  std::vector<double> alphas(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    alphas[i] = records[i].l_abc == 0.0 ? 1e-3 : 1.0;
  }
  const double eff = estimated_relative_efficiency(records, alphas);
  CHECK(eff > 1.5);
  CHECK(eff == doctest::Approx(relative_efficiency_direct(
                   records, alphas)).epsilon(1e-12));

  // Matches the two-formula computation on random alphas.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ud(0.05, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    for (auto& a : alphas) {
      a = ud(rng);
    }
    CHECK(estimated_relative_efficiency(records, alphas) ==
          doctest::Approx(relative_efficiency_direct(records, alphas))
              .epsilon(1e-12));
  }

  // All-zero kernel values make the efficiency undefined.
  for (auto& r : records) {
    r.l_abc = 0.0;
  }
  CHECK_THROWS_AS(estimated_relative_efficiency(records, ones),
                  DegenerateSampleError);
}

TEST_CASE("optimize_lambda: free continuation keeps alpha at one") {
  auto records = synthetic_records(
      80, 10, [](std::mt19937_64& r) { return std::uniform_real_distribution<double>(0, 1)(r); },
      [](double, std::mt19937_64& r) { return std::uniform_real_distribution<double>(0, 1)(r); },
      [](double) { return 0.0; });
  auto gamma = fit_squared_weight_regressor(records, kStat0, 0.5);
  auto t2 = fit_continuation_time_regressor(records, kStat0, 0.5);
  const auto choice = optimize_lambda(records, gamma, t2, kStat0, 1e-3);
  CHECK(choice.efficiency >= 1.0 - 1e-9);
  CHECK(choice.efficiency <= 1.0 + 1e-12);

  // The chosen lambda floors nothing: every training alpha is 1.
  const auto policy = ContinuationPolicy::fitted(gamma, t2, choice.lambda,
                                                 {0}, 1e-3);
  for (const auto& r : records) {
    CHECK(policy.continuation_prob(r.phi) == 1.0);
  }
}

TEST_CASE("optimize_lambda: two-atom instance matches the exhaustive grid") {
  // Tabulated atoms; tiny regression bandwidth makes the fitted
  // predictions exact at the atoms, so this exercises the form of the
  // optimal rule itself.
  const std::vector<AtomSpec> atoms{
      {0.0, 0.9, 0.001, 0.02, 50},
      {1.0, 0.02, 0.001, 0.01, 50},
  };
  const auto records = make_atom_records(atoms);
  auto gamma = fit_squared_weight_regressor(records, kStat0, 1e-3);
  auto t2 = fit_continuation_time_regressor(records, kStat0, 1e-3);
  const double alpha_min = 0.01;
  const auto choice = optimize_lambda(records, gamma, t2, kStat0, alpha_min);

  std::vector<double> grid;
  for (int i = 1; i <= 100; ++i) {
    grid.push_back(0.01 * i);
  }
  const double grid_best =
      grid_optimum_objective(records, {0.0, 1.0}, grid);

  const auto policy =
      ContinuationPolicy::fitted(gamma, t2, choice.lambda, {0}, alpha_min);
  std::vector<double> alphas;
  alphas.reserve(records.size());
  for (const auto& r : records) {
    alphas.push_back(policy.continuation_prob(r.phi));
  }
  const double achieved = efficiency_objective_direct(records, alphas);
  CHECK(achieved >= 0.99 * grid_best);
}

TEST_CASE("optimize_lambda: chosen lambda beats its grid neighbours") {
  auto records = synthetic_records(
      200, 11, [](std::mt19937_64& r) { return std::uniform_real_distribution<double>(0, 4)(r); },
      [](double phi, std::mt19937_64&) { return std::exp(-phi); },
      [](double) { return 0.02; });
  auto gamma = fit_squared_weight_regressor(records, kStat0, 0.3);
  auto t2 = fit_continuation_time_regressor(records, kStat0, 0.3);
  const double alpha_min = 1e-3;
  const auto choice = optimize_lambda(records, gamma, t2, kStat0, alpha_min);

  auto efficiency_at = [&](double lambda) {
    const auto policy =
        ContinuationPolicy::fitted(gamma, t2, lambda, {0}, alpha_min);
    std::vector<double> alphas;
    alphas.reserve(records.size());
    for (const auto& r : records) {
      alphas.push_back(policy.continuation_prob(r.phi));
    }
    return estimated_relative_efficiency(records, alphas);
  };
  const double at_choice = efficiency_at(choice.lambda);
  CHECK(at_choice == doctest::Approx(choice.efficiency).epsilon(1e-12));
  CHECK(at_choice >= efficiency_at(choice.lambda * 1.05) - 1e-9);
  CHECK(at_choice >= efficiency_at(choice.lambda * 0.95) - 1e-9);
  CHECK(choice.efficiency > 1.0);
}

TEST_CASE("alpha is monotone nondecreasing in lambda") {
  auto records = synthetic_records(
      50, 12, [](std::mt19937_64& r) { return std::uniform_real_distribution<double>(0, 2)(r); },
      [](double phi, std::mt19937_64&) { return std::exp(-phi); },
      [](double) { return 0.02; });
  auto gamma = fit_squared_weight_regressor(records, kStat0, 0.5);
  auto t2 = fit_continuation_time_regressor(records, kStat0, 0.5);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ud(0.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double l1 = std::exp(ud(rng) * 4.0 - 4.0);
    const double l2 = l1 * (1.0 + ud(rng));
    const auto p1 = ContinuationPolicy::fitted(gamma, t2, l1, {0}, 1e-3);
    const auto p2 = ContinuationPolicy::fitted(gamma, t2, l2, {0}, 1e-3);
    const std::vector<double> q{ud(rng)};
    CHECK(p1.continuation_prob(q) <= p2.continuation_prob(q) + 1e-15);
  }
  // Large enough lambda forces alpha to 1 everywhere.
  const auto p_inf = ContinuationPolicy::fitted(gamma, t2, 1e12, {0}, 1e-3);
  for (const auto& r : records) {
    CHECK(p_inf.continuation_prob(r.phi) == 1.0);
  }
}

TEST_CASE("backward_select: single candidate is returned as-is") {
  auto records = synthetic_records(
      50, 14, [](std::mt19937_64& r) { return std::uniform_real_distribution<double>(0, 1)(r); },
      [](double phi, std::mt19937_64&) { return std::exp(-2.0 * phi); },
      [](double) { return 0.02; });
  const auto result = backward_select(records, kStat0, 0.5, 1e-3);
  CHECK(result.stat_subset == kStat0);
  CHECK(result.estimated_relative_efficiency >= 1.0 - 1e-12);
}

TEST_CASE("backward_select drops a pure-noise statistic on 1e4 records") {
  // phi_0 drives both the kernel value and the continuation time;
  // phi_1 is independent noise that only dilutes the regressions.
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u05(0.0, 5.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<TrainingRecord> records(10000);
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& r = records[i];
    const double phi0 = u05(rng);
    const double noise = u01(rng);
    r.theta = {phi0};
    r.phi = {phi0, noise};
    r.l_abc = std::exp(-4.0 * phi0);
    r.t1_seconds = 0.001;
    r.t2_seconds = 0.01 * (1.0 + phi0);
    r.prior_density = r.proposal_density = 1.0;
    r.seed_index = i;
  }
  const std::vector<std::size_t> both{0, 1};
  const double bandwidth = 0.3;
  const std::size_t cap = 500;

  const auto full = backward_select(records, both, bandwidth, 1e-3, cap);
  CHECK(full.stat_subset == std::vector<std::size_t>{0});

  // Direct comparison of the two subset efficiencies.
  auto efficiency_of = [&](const std::vector<std::size_t>& subset) {
    auto gamma = fit_squared_weight_regressor(records, subset, bandwidth, cap);
    auto t2 = fit_continuation_time_regressor(records, subset, bandwidth, cap);
    return optimize_lambda(records, gamma, t2, subset, 1e-3).efficiency;
  };
  const double informative_only = efficiency_of({0});
  const double with_noise = efficiency_of(both);
  CHECK(informative_only > with_noise);
  CHECK(full.estimated_relative_efficiency ==
        doctest::Approx(informative_only).epsilon(1e-12));
  CHECK(full.estimated_relative_efficiency >= with_noise);
}

TEST_CASE("collect_training: full runs, determinism, and the second-moment oracle") {
  ConjugateNormalModel model;
  AbcConfig cfg;
  cfg.bandwidth = 0.7;
  cfg.n_draws = 100;
  cfg.master_seed = 17;

  const auto tc = collect_training(model, model.prior(), 100, cfg);
  REQUIRE(tc.records.size() == 100);
  REQUIRE(tc.draws.size() == 100);
  for (const auto& r : tc.records) {
    CHECK(r.t2_seconds > 0.0);  // alpha == 1 never stops
    CHECK(r.phi.size() == model.decision_stat_dim());
  }
  for (const auto& d : tc.draws) {
    CHECK(!d.stopped_early);
    CHECK(d.continuation_prob == 1.0);
  }

  const auto again = collect_training(model, model.prior(), 100, cfg);
  for (std::size_t i = 0; i < tc.records.size(); ++i) {
    CHECK(again.records[i].theta == tc.records[i].theta);
    CHECK(again.records[i].phi == tc.records[i].phi);
    CHECK(again.records[i].l_abc == tc.records[i].l_abc);
  }

  CHECK_THROWS_AS(collect_training(model, model.prior(), 1, cfg), ConfigError);

  // Training records agree with the standard engine at the same seed.
  const auto standard = run_standard_abc(model, model.prior(), cfg);
  for (std::size_t i = 0; i < tc.records.size(); ++i) {
    CHECK(tc.records[i].theta == standard[i].theta);
    CHECK(tc.records[i].l_abc == standard[i].l_abc);
  }

  // Mean of (l pi/g)^2 over 1e4 training records matches the
  // closed-form E[w^2] under the normal kernel within 3 standard
  // errors. K^2 is a Gaussian kernel with variance h^2/4.
  AbcConfig big = cfg;
  big.n_draws = 10000;
  big.master_seed = 18;
  const auto big_tc = collect_training(model, model.prior(), 10000, big);
  std::vector<double> sq;
  sq.reserve(big_tc.records.size());
  for (const auto& r : big_tc.records) {
    const double w = r.l_abc * r.prior_density / r.proposal_density;
    sq.push_back(w * w);
  }
  const auto& mc = model.config();
  const double s_obs = model.observed_summary()[0];
  const double var0 = mc.prior_sd * mc.prior_sd;
  const double summary_var = 1.0 / mc.n_obs;
  const double v2 = big.bandwidth * big.bandwidth / 4.0;
  const double sigma2 = v2 + summary_var;
  const double expected_w2 =
      std::sqrt(v2 / sigma2) * std::sqrt(sigma2 / (var0 + sigma2)) *
      std::exp(-(s_obs - mc.prior_mean) * (s_obs - mc.prior_mean) /
               (2.0 * (var0 + sigma2)));
  const double se = sd_of(sq) / std::sqrt(static_cast<double>(sq.size()));
  CHECK(std::abs(mean_of(sq) - expected_w2) < 3.0 * se);
}
