#include "lazyabc/harness.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "lazyabc/timing.hpp"

namespace lazyabc {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void check_known_keys(const json& j, std::initializer_list<const char*> known,
                      const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool found = false;
    for (const char* k : known) {
      if (key == k) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

KernelSpec parse_kernel(const std::string& name) {
  if (name == "normal") return {KernelKind::Normal};
  if (name == "uniform") return {KernelKind::Uniform};
  throw ConfigError("unknown kernel '" + name + "' (want normal|uniform)");
}

std::string kernel_name(const KernelSpec& k) {
  return k.kind == KernelKind::Normal ? "normal" : "uniform";
}

std::string distance_name(const DistanceSpec& d) {
  return d.kind == DistanceKind::Euclidean ? "euclidean" : "weighted_euclidean";
}

template <typename T>
std::vector<T> get_vector(const json& j) {
  return j.get<std::vector<T>>();
}

}  // namespace

RunConfig parse_run_config(const json& j) {
  check_known_keys(j,
                   {"model", "model_params", "mode", "n_draws", "bandwidth",
                    "kernel", "distance", "distance_weights", "master_seed",
                    "training_size", "workers", "out_dir", "alpha_min",
                    "nw_bandwidth", "nw_max_points", "lambda", "policy",
                    "constant_alpha", "proposal"},
                   "run config");
  RunConfig cfg;
  try {
    cfg.model = j.at("model").get<std::string>();
    cfg.mode = j.at("mode").get<std::string>();
    cfg.model_params = j.value("model_params", json::object());
    cfg.abc.n_draws = j.value("n_draws", std::size_t{10000});
    cfg.abc.bandwidth = j.value("bandwidth", 1.0);
    cfg.abc.kernel = parse_kernel(j.value("kernel", std::string("normal")));
    const std::string dist = j.value("distance", std::string("euclidean"));
    if (dist == "euclidean") {
      cfg.abc.distance.kind = DistanceKind::Euclidean;
    } else if (dist == "weighted_euclidean") {
      cfg.abc.distance.kind = DistanceKind::WeightedEuclidean;
      cfg.abc.distance.weights =
          get_vector<double>(j.at("distance_weights"));
    } else {
      throw ConfigError("unknown distance '" + dist + "'");
    }
    cfg.abc.master_seed = j.value("master_seed", std::uint64_t{1});
    cfg.training_size = j.value("training_size", std::size_t{0});
    cfg.workers = j.value("workers", std::size_t{1});
    cfg.out_dir = j.value("out_dir", std::string("."));
    cfg.alpha_min = j.value("alpha_min", ContinuationPolicy::kDefaultAlphaMin);
    cfg.nw_bandwidth = j.value("nw_bandwidth", 0.5);
    cfg.nw_max_points = j.value("nw_max_points", std::size_t{500});
    if (j.contains("lambda") && !j.at("lambda").is_null()) {
      cfg.lambda_override = j.at("lambda").get<double>();
    }
    cfg.policy = j.value("policy", std::string("always_one"));
    cfg.constant_alpha = j.value("constant_alpha", 1.0);
    cfg.proposal = j.value("proposal", json());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad run config: ") + e.what());
  }

  if (cfg.mode != "standard" && cfg.mode != "lazy" &&
      cfg.mode != "tune-then-lazy") {
    throw ConfigError("unknown mode '" + cfg.mode +
                      "' (want standard|lazy|tune-then-lazy)");
  }
  if (cfg.abc.n_draws == 0) {
    throw ConfigError("n_draws must be at least 1");
  }
  if (cfg.mode == "tune-then-lazy") {
    if (cfg.training_size == 0) {
      cfg.training_size = std::max<std::size_t>(100, cfg.abc.n_draws / 10);
    }
    if (cfg.training_size > cfg.abc.n_draws) {
      throw ConfigError("tune-then-lazy requires n_draws >= training_size");
    }
    if (cfg.training_size < 2) {
      throw ConfigError("training_size must be at least 2");
    }
  }
  if (!(cfg.alpha_min > 0.0) || cfg.alpha_min > 1.0) {
    throw ConfigError("alpha_min must be in (0, 1]");
  }
  if (!(cfg.nw_bandwidth > 0.0)) {
    throw ConfigError("nw_bandwidth must be positive");
  }
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read config file: " + path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_run_config(j);
}

std::unique_ptr<TwoStageModel> build_model(const RunConfig& cfg) {
  const json p =
      cfg.model_params.is_null() ? json::object() : cfg.model_params;
  try {
    if (cfg.model == "conjugate_normal") {
      check_known_keys(p,
                       {"prior_mean", "prior_sd", "n_obs", "n_initial",
                        "observed", "observed_theta", "observed_seed",
                        "fail_rate"},
                       "model_params");
      ConjugateNormalConfig mc;
      mc.prior_mean = p.value("prior_mean", mc.prior_mean);
      mc.prior_sd = p.value("prior_sd", mc.prior_sd);
      mc.n_obs = p.value("n_obs", mc.n_obs);
      mc.n_initial = p.value("n_initial", mc.n_initial);
      if (p.contains("observed")) {
        mc.observed = get_vector<double>(p.at("observed"));
      }
      mc.observed_theta = p.value("observed_theta", mc.observed_theta);
      mc.observed_seed = p.value("observed_seed", mc.observed_seed);
      mc.fail_rate = p.value("fail_rate", mc.fail_rate);
      return std::make_unique<ConjugateNormalModel>(std::move(mc));
    }
    if (cfg.model == "triple_summary") {
      check_known_keys(p,
                       {"n_years", "n_locations", "subset", "c_min", "c_max",
                        "nu_min", "nu_max", "summary_work", "observed_csv",
                        "observed_c", "observed_nu", "observed_seed"},
                       "model_params");
      TripleSummaryConfig mc;
      mc.n_years = p.value("n_years", mc.n_years);
      mc.n_locations = p.value("n_locations", mc.n_locations);
      if (p.contains("subset")) {
        mc.subset = get_vector<int>(p.at("subset"));
      }
      mc.c_min = p.value("c_min", mc.c_min);
      mc.c_max = p.value("c_max", mc.c_max);
      mc.nu_min = p.value("nu_min", mc.nu_min);
      mc.nu_max = p.value("nu_max", mc.nu_max);
      mc.summary_work = p.value("summary_work", mc.summary_work);
      mc.distance = cfg.abc.distance;
      if (p.contains("observed_csv")) {
        const YearlyData data =
            read_yearly_csv(p.at("observed_csv").get<std::string>());
        mc.observed = data.values;
        mc.n_years = static_cast<int>(data.n_years);
        mc.n_locations = static_cast<int>(data.n_locations);
      }
      mc.observed_c = p.value("observed_c", mc.observed_c);
      mc.observed_nu = p.value("observed_nu", mc.observed_nu);
      mc.observed_seed = p.value("observed_seed", mc.observed_seed);
      return std::make_unique<TripleSummaryModel>(std::move(mc));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad model_params: ") + e.what());
  }
  throw ConfigError("unknown model '" + cfg.model +
                    "' (want conjugate_normal|triple_summary)");
}

std::unique_ptr<Distribution> build_proposal(const RunConfig& cfg,
                                             const TwoStageModel& model) {
  if (cfg.proposal.is_null() || cfg.proposal.empty()) {
    return nullptr;
  }
  try {
    check_known_keys(cfg.proposal, {"kind", "mean", "sd", "lower", "upper"},
                     "proposal");
    const std::string kind = cfg.proposal.at("kind").get<std::string>();
    if (kind == "prior") {
      return nullptr;
    }
    std::unique_ptr<Distribution> proposal;
    if (kind == "normal") {
      proposal = std::make_unique<NormalDistribution>(
          get_vector<double>(cfg.proposal.at("mean")),
          get_vector<double>(cfg.proposal.at("sd")));
    } else if (kind == "uniform") {
      proposal = std::make_unique<UniformBoxDistribution>(
          get_vector<double>(cfg.proposal.at("lower")),
          get_vector<double>(cfg.proposal.at("upper")));
    } else {
      throw ConfigError("unknown proposal kind '" + kind + "'");
    }
    if (proposal->dim() != model.param_dim()) {
      throw ConfigError("proposal dimension does not match the model");
    }
    return proposal;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad proposal: ") + e.what());
  }
}

std::string observed_hash(const TwoStageModel& model) {
  const SummaryVector& s = model.observed_summary();
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a 64
  auto mix = [&h](const void* bytes, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(bytes);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  const std::uint64_t dim = s.size();
  mix(&dim, sizeof(dim));
  for (double v : s) {
    mix(&v, sizeof(v));
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ordered_json report_to_json(const EfficiencyReport& r) {
  ordered_json j;
  j["format"] = "lazyabc-report-v1";
  j["version"] = kVersion;
  j["mode"] = r.mode;
  j["model"] = r.model;
  j["bandwidth"] = r.bandwidth;
  j["kernel"] = r.kernel;
  j["distance"] = r.distance;
  j["observed_hash"] = r.observed_hash;
  j["master_seed"] = r.master_seed;
  j["n_draws"] = r.n_draws;
  j["n_stopped"] = r.n_stopped;
  j["n_failed"] = r.n_failed;
  j["ess"] = r.ess;
  j["z_hat"] = r.z_hat;
  j["degenerate_sample"] = r.degenerate_sample;
  j["draws_cpu_seconds"] = r.draws_cpu_seconds;
  j["tuning_cpu_seconds"] = r.tuning_cpu_seconds;
  j["total_cpu_seconds"] = r.total_cpu_seconds;
  j["wall_seconds"] = r.wall_seconds;
  j["estimated_relative_efficiency"] =
      r.estimated_relative_efficiency
          ? json(*r.estimated_relative_efficiency)
          : json(nullptr);
  j["actual_relative_efficiency"] = r.actual_relative_efficiency
                                        ? json(*r.actual_relative_efficiency)
                                        : json(nullptr);
  return j;
}

EfficiencyReport report_from_json(const json& j) {
  EfficiencyReport r;
  try {
    r.mode = j.value("mode", std::string());
    r.model = j.value("model", std::string());
    r.bandwidth = j.value("bandwidth", 0.0);
    r.kernel = j.value("kernel", std::string());
    r.distance = j.value("distance", std::string());
    r.observed_hash = j.value("observed_hash", std::string());
    r.master_seed = j.value("master_seed", std::uint64_t{0});
    r.n_draws = j.value("n_draws", std::size_t{0});
    r.n_stopped = j.value("n_stopped", std::size_t{0});
    r.n_failed = j.value("n_failed", std::size_t{0});
    r.ess = j.value("ess", 0.0);
    r.z_hat = j.value("z_hat", 0.0);
    r.degenerate_sample = j.value("degenerate_sample", false);
    r.draws_cpu_seconds = j.value("draws_cpu_seconds", 0.0);
    r.tuning_cpu_seconds = j.value("tuning_cpu_seconds", 0.0);
    r.total_cpu_seconds = j.value("total_cpu_seconds", 0.0);
    r.wall_seconds = j.value("wall_seconds", 0.0);
    if (j.contains("estimated_relative_efficiency") &&
        !j.at("estimated_relative_efficiency").is_null()) {
      r.estimated_relative_efficiency =
          j.at("estimated_relative_efficiency").get<double>();
    }
    if (j.contains("actual_relative_efficiency") &&
        !j.at("actual_relative_efficiency").is_null()) {
      r.actual_relative_efficiency =
          j.at("actual_relative_efficiency").get<double>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad report json: ") + e.what());
  }
  return r;
}

EfficiencyReport load_report(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read report: " + path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("report is not valid JSON: " + std::string(e.what()));
  }
  return report_from_json(j);
}

namespace {

ordered_json regressor_to_json(const NwRegressor& reg) {
  ordered_json j;
  j["bandwidth"] = reg.bandwidth();
  j["center"] = reg.standardizer().center();
  j["scale"] = reg.standardizer().scale();
  j["points"] = reg.points();
  j["responses"] = reg.responses();
  return j;
}

NwRegressor regressor_from_json(const json& j) {
  return NwRegressor::from_parts(
      Standardizer::from_parts(j.at("center").get<std::vector<double>>(),
                               j.at("scale").get<std::vector<double>>()),
      j.at("points").get<std::vector<std::vector<double>>>(),
      j.at("responses").get<std::vector<double>>(),
      j.at("bandwidth").get<double>());
}

}  // namespace

void save_policy(const fs::path& path, const ContinuationPolicy& policy,
                 std::optional<double> estimated_efficiency) {
  ordered_json j;
  j["format"] = "lazyabc-policy-v1";
  switch (policy.mode()) {
    case ContinuationPolicy::Mode::AlwaysOne:
      j["mode"] = "always_one";
      break;
    case ContinuationPolicy::Mode::Constant:
      j["mode"] = "constant";
      j["constant_alpha"] = policy.constant_value();
      break;
    case ContinuationPolicy::Mode::Fitted:
      j["mode"] = "fitted";
      j["alpha_min"] = policy.alpha_min();
      j["lambda"] = policy.lambda();
      j["stat_subset"] = policy.stat_subset();
      j["squared_weight"] = regressor_to_json(policy.squared_weight_regressor());
      j["continuation_time"] =
          regressor_to_json(policy.continuation_time_regressor());
      break;
  }
  j["estimated_relative_efficiency"] =
      estimated_efficiency ? json(*estimated_efficiency) : json(nullptr);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ConfigError("cannot write policy: " + path.string());
  }
  out << j.dump(2) << '\n';
}

LoadedPolicy load_policy(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read policy: " + path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("policy is not valid JSON: " + std::string(e.what()));
  }
  try {
    LoadedPolicy out{ContinuationPolicy::always_one(), std::nullopt};
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "always_one") {
      out.policy = ContinuationPolicy::always_one();
    } else if (mode == "constant") {
      out.policy = ContinuationPolicy::constant(
          j.at("constant_alpha").get<double>());
    } else if (mode == "fitted") {
      out.policy = ContinuationPolicy::fitted(
          regressor_from_json(j.at("squared_weight")),
          regressor_from_json(j.at("continuation_time")),
          j.at("lambda").get<double>(),
          j.at("stat_subset").get<std::vector<std::size_t>>(),
          j.at("alpha_min").get<double>());
    } else {
      throw ConfigError("unknown policy mode '" + mode + "'");
    }
    if (j.contains("estimated_relative_efficiency") &&
        !j.at("estimated_relative_efficiency").is_null()) {
      out.estimated_efficiency =
          j.at("estimated_relative_efficiency").get<double>();
    }
    return out;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad policy file: ") + e.what());
  }
}

namespace {

EfficiencyReport summarize_draws(const std::vector<WeightedDraw>& draws) {
  EfficiencyReport r;
  r.n_draws = draws.size();
  std::vector<double> weights;
  weights.reserve(draws.size());
  for (const auto& d : draws) {
    r.draws_cpu_seconds += d.t1_seconds + d.t2_seconds;
    if (d.failed) {
      ++r.n_failed;
      continue;
    }
    if (d.stopped_early) {
      ++r.n_stopped;
    }
    weights.push_back(d.weight);
  }
  if (!weights.empty()) {
    r.ess = effective_sample_size(weights);
    r.z_hat = normalizing_constant_estimate(weights);
  }
  r.degenerate_sample = r.ess == 0.0;
  r.total_cpu_seconds = r.draws_cpu_seconds;
  return r;
}

struct ResolvedPolicy {
  ContinuationPolicy policy;
  std::optional<double> estimated_efficiency;
};

ResolvedPolicy resolve_lazy_policy(const RunConfig& cfg) {
  if (cfg.policy == "always_one") {
    if (cfg.lambda_override) {
      throw ConfigError("lambda override requires a fitted policy");
    }
    return {ContinuationPolicy::always_one(), std::nullopt};
  }
  if (cfg.policy == "constant") {
    if (cfg.lambda_override) {
      throw ConfigError("lambda override requires a fitted policy");
    }
    return {ContinuationPolicy::constant(cfg.constant_alpha), std::nullopt};
  }
  LoadedPolicy loaded = load_policy(cfg.policy);
  if (cfg.lambda_override) {
    if (loaded.policy.mode() != ContinuationPolicy::Mode::Fitted) {
      throw ConfigError("lambda override requires a fitted policy");
    }
    loaded.policy = loaded.policy.with_lambda(*cfg.lambda_override);
    loaded.estimated_efficiency.reset();  // stale after the override
  }
  return {std::move(loaded.policy), loaded.estimated_efficiency};
}

std::vector<std::size_t> all_stat_indices(const TwoStageModel& model) {
  std::vector<std::size_t> idx(model.decision_stat_dim());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

}  // namespace

RunResult cmd_run(const RunConfig& cfg) {
  const double wall_start = wall_seconds();
  const auto model = build_model(cfg);
  const auto proposal_owned = build_proposal(cfg, *model);
  const Distribution& proposal =
      proposal_owned ? *proposal_owned : model->prior();

  fs::create_directories(cfg.out_dir);
  RunResult result;
  result.draws_path = cfg.out_dir / "draws.csv";
  result.report_path = cfg.out_dir / "report.json";

  std::vector<WeightedDraw> draws;
  double tuning_cpu = 0.0;
  std::optional<double> estimated_efficiency;

  const EngineOptions opt{cfg.workers, 0};
  if (cfg.mode == "standard") {
    draws = run_standard_abc(*model, proposal, cfg.abc, opt);
  } else if (cfg.mode == "lazy") {
    ResolvedPolicy resolved = resolve_lazy_policy(cfg);
    estimated_efficiency = resolved.estimated_efficiency;
    draws = run_lazy_abc(*model, resolved.policy, proposal, cfg.abc, opt);
  } else {  // tune-then-lazy
    const std::size_t m = cfg.training_size;
    AbcConfig train_cfg = cfg.abc;
    TrainingCollection training =
        collect_training(*model, proposal, m, train_cfg, opt);

    const double tune_start = thread_cpu_seconds();
    TuningResult tuning;
    if (cfg.lambda_override) {
      // Forced trade-off scale: fit on the full candidate set, skip the
      // lambda search, but still report the efficiency estimate at the
      // forced value.
      const auto candidates = all_stat_indices(*model);
      tuning.squared_weight_regressor = fit_squared_weight_regressor(
          training.records, candidates, cfg.nw_bandwidth, cfg.nw_max_points);
      tuning.continuation_time_regressor = fit_continuation_time_regressor(
          training.records, candidates, cfg.nw_bandwidth, cfg.nw_max_points);
      tuning.lambda = *cfg.lambda_override;
      tuning.stat_subset = candidates;
      tuning.nw_bandwidth = cfg.nw_bandwidth;
      tuning.alpha_min = cfg.alpha_min;
      const ContinuationPolicy forced = make_policy(tuning);
      std::vector<double> alphas;
      alphas.reserve(training.records.size());
      for (const auto& rec : training.records) {
        alphas.push_back(forced.continuation_prob(rec.phi));
      }
      tuning.estimated_relative_efficiency =
          estimated_relative_efficiency(training.records, alphas);
    } else {
      tuning = backward_select(training.records, all_stat_indices(*model),
                               cfg.nw_bandwidth, cfg.alpha_min,
                               cfg.nw_max_points);
    }
    tuning_cpu = thread_cpu_seconds() - tune_start;
    estimated_efficiency = tuning.estimated_relative_efficiency;

    result.training_path = cfg.out_dir / "training.csv";
    write_training_csv(result.training_path, training.records,
                       model->param_dim(), model->decision_stat_dim());
    const ContinuationPolicy policy = make_policy(tuning);
    result.policy_path = cfg.out_dir / "policy.json";
    save_policy(result.policy_path, policy,
                tuning.estimated_relative_efficiency);

    AbcConfig lazy_cfg = cfg.abc;
    lazy_cfg.n_draws = cfg.abc.n_draws - m;
    draws = std::move(training.draws);
    if (lazy_cfg.n_draws > 0) {
      std::vector<WeightedDraw> lazy_draws = run_lazy_abc(
          *model, policy, proposal, lazy_cfg, EngineOptions{cfg.workers, m});
      draws.insert(draws.end(), std::make_move_iterator(lazy_draws.begin()),
                   std::make_move_iterator(lazy_draws.end()));
    }
  }

  EfficiencyReport report = summarize_draws(draws);
  report.mode = cfg.mode;
  report.model = cfg.model;
  report.bandwidth = cfg.abc.bandwidth;
  report.kernel = kernel_name(cfg.abc.kernel);
  report.distance = distance_name(cfg.abc.distance);
  report.observed_hash = observed_hash(*model);
  report.master_seed = cfg.abc.master_seed;
  report.tuning_cpu_seconds = tuning_cpu;
  report.total_cpu_seconds = report.draws_cpu_seconds + tuning_cpu;
  report.estimated_relative_efficiency = estimated_efficiency;
  report.wall_seconds = wall_seconds() - wall_start;

  write_draws_csv(result.draws_path, draws, model->param_dim());
  std::ofstream out(result.report_path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ConfigError("cannot write report: " + result.report_path.string());
  }
  out << report_to_json(report).dump(2) << '\n';

  result.report = std::move(report);
  return result;
}

TuneResult cmd_tune(const fs::path& records_csv, const TuneOptions& options) {
  const TrainingFile file = read_training_csv(records_csv);
  if (file.records.size() < 2) {
    throw ConfigError("tuning needs at least 2 training records");
  }
  std::vector<std::size_t> candidates(file.phi_dim);
  std::iota(candidates.begin(), candidates.end(), std::size_t{0});

  TuneResult result;
  if (options.lambda_override) {
    TuningResult tuning;
    tuning.squared_weight_regressor = fit_squared_weight_regressor(
        file.records, candidates, options.nw_bandwidth, options.nw_max_points);
    tuning.continuation_time_regressor = fit_continuation_time_regressor(
        file.records, candidates, options.nw_bandwidth, options.nw_max_points);
    tuning.lambda = *options.lambda_override;
    tuning.stat_subset = candidates;
    tuning.nw_bandwidth = options.nw_bandwidth;
    tuning.alpha_min = options.alpha_min;
    const ContinuationPolicy forced = make_policy(tuning);
    std::vector<double> alphas;
    alphas.reserve(file.records.size());
    for (const auto& rec : file.records) {
      alphas.push_back(forced.continuation_prob(rec.phi));
    }
    tuning.estimated_relative_efficiency =
        estimated_relative_efficiency(file.records, alphas);
    result.tuning = std::move(tuning);
  } else {
    result.tuning =
        backward_select(file.records, candidates, options.nw_bandwidth,
                        options.alpha_min, options.nw_max_points);
  }

  fs::create_directories(options.out_dir);
  result.policy_path = options.out_dir / "policy.json";
  save_policy(result.policy_path, make_policy(result.tuning),
              result.tuning.estimated_relative_efficiency);
  return result;
}

CompareResult compare_reports(const EfficiencyReport& standard_report,
                              const EfficiencyReport& lazy_report) {
  auto mismatch = [](const std::string& field) {
    throw ConfigError("incompatible runs: field '" + field + "' differs");
  };
  if (standard_report.model != lazy_report.model) mismatch("model");
  if (standard_report.bandwidth != lazy_report.bandwidth) mismatch("bandwidth");
  if (standard_report.kernel != lazy_report.kernel) mismatch("kernel");
  if (standard_report.distance != lazy_report.distance) mismatch("distance");
  if (standard_report.observed_hash != lazy_report.observed_hash) {
    mismatch("observed_hash");
  }
  if (!(standard_report.total_cpu_seconds > 0.0) ||
      !(lazy_report.total_cpu_seconds > 0.0)) {
    throw ConfigError("compare: runs must report positive CPU time");
  }
  if (!(standard_report.ess > 0.0)) {
    throw DegenerateSampleError("compare: standard run has zero ESS");
  }

  CompareResult result;
  const double standard_rate =
      standard_report.ess / standard_report.total_cpu_seconds;
  const double lazy_rate = lazy_report.ess / lazy_report.total_cpu_seconds;
  result.actual_relative_efficiency = lazy_rate / standard_rate;

  std::ostringstream table;
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return std::string(buf);
  };
  table << "              standard      lazy\n";
  table << "time (s)      " << fmt(standard_report.total_cpu_seconds) << "\t"
        << fmt(lazy_report.total_cpu_seconds) << "\n";
  table << "ESS           " << fmt(standard_report.ess) << "\t"
        << fmt(lazy_report.ess) << "\n";
  table << "est. rel. eff.  -\t"
        << (lazy_report.estimated_relative_efficiency
                ? fmt(*lazy_report.estimated_relative_efficiency)
                : "-")
        << "\n";
  table << "actual rel. eff. " << fmt(result.actual_relative_efficiency)
        << "\n";
  result.table = table.str();

  ordered_json j;
  j["standard"] = report_to_json(standard_report);
  j["lazy"] = report_to_json(lazy_report);
  j["actual_relative_efficiency"] = result.actual_relative_efficiency;
  result.as_json = std::move(j);
  return result;
}

CompareResult cmd_compare(const fs::path& standard_report_path,
                          const fs::path& lazy_report_path) {
  return compare_reports(load_report(standard_report_path),
                         load_report(lazy_report_path));
}

EfficiencyReport cmd_report(const fs::path& draws_csv) {
  const DrawsFile file = read_draws_csv(draws_csv);
  EfficiencyReport r = summarize_draws(file.draws);
  r.mode = "offline";
  return r;
}

}  // namespace lazyabc
