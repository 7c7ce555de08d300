// Command-line front end: reproducible standard / lazy ABC runs,
// stopping-rule tuning from recorded training data, and efficiency
// comparison of paired runs.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lazyabc/harness.hpp"

namespace {

void print_report_summary(const lazyabc::EfficiencyReport& r) {
  std::cout << "mode: " << r.mode << "  model: " << r.model << '\n'
            << "draws: " << r.n_draws << "  stopped: " << r.n_stopped
            << "  failed: " << r.n_failed << '\n'
            << "ess: " << r.ess << "  z_hat: " << r.z_hat << '\n'
            << "cpu seconds: " << r.total_cpu_seconds
            << " (tuning " << r.tuning_cpu_seconds << ")  wall: "
            << r.wall_seconds << '\n';
  if (r.estimated_relative_efficiency) {
    std::cout << "estimated relative efficiency: "
              << *r.estimated_relative_efficiency << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lazy ABC: importance-sampling ABC with early-stopped simulations"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::string> out_dir;
  std::optional<double> lambda;
  std::optional<double> alpha_min;

  auto* run = app.add_subcommand("run", "Execute a configured analysis");
  run->add_option("--config", config_path, "Run configuration JSON")->required();
  run->add_option("--seed", seed, "Override master_seed");
  run->add_option("--workers", workers, "Override worker count");
  run->add_option("--out", out_dir, "Override output directory");
  run->add_option("--lambda", lambda, "Override the stopping-rule trade-off scale");
  run->add_option("--alpha-min", alpha_min, "Override the continuation-probability floor");

  std::string records_path;
  lazyabc::TuneOptions tune_options;
  std::string tune_out = ".";
  std::optional<double> tune_lambda;
  auto* tune = app.add_subcommand("tune", "Fit a stopping rule from recorded training data");
  tune->add_option("--records", records_path, "Training records CSV")->required();
  tune->add_option("--out", tune_out, "Output directory");
  tune->add_option("--nw-bandwidth", tune_options.nw_bandwidth,
                   "Regression bandwidth on the standardized scale");
  tune->add_option("--alpha-min", tune_options.alpha_min,
                   "Continuation-probability floor");
  tune->add_option("--max-points", tune_options.nw_max_points,
                   "Regressor point cap (0 = keep all)");
  tune->add_option("--lambda", tune_lambda, "Skip the search and force this scale");

  std::string standard_path;
  std::string lazy_path;
  std::optional<std::string> compare_out;
  auto* compare = app.add_subcommand("compare", "Compare a standard run with a lazy run");
  compare->add_option("--standard", standard_path, "Standard-run report JSON")->required();
  compare->add_option("--lazy", lazy_path, "Lazy-run report JSON")->required();
  compare->add_option("--out", compare_out, "Write the comparison as JSON");

  std::string draws_path;
  auto* report = app.add_subcommand("report", "Recompute estimates from a draws CSV");
  report->add_option("--draws", draws_path, "Draws CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // bad invocation is a configuration error
  }

  try {
    if (run->parsed()) {
      lazyabc::RunConfig cfg = lazyabc::load_run_config(config_path);
      if (seed) cfg.abc.master_seed = *seed;
      if (workers) cfg.workers = *workers;
      if (out_dir) cfg.out_dir = *out_dir;
      if (lambda) cfg.lambda_override = *lambda;
      if (alpha_min) cfg.alpha_min = *alpha_min;
      const lazyabc::RunResult result = lazyabc::cmd_run(cfg);
      print_report_summary(result.report);
      std::cout << "draws: " << result.draws_path.string() << '\n'
                << "report: " << result.report_path.string() << '\n';
      if (!result.policy_path.empty()) {
        std::cout << "policy: " << result.policy_path.string() << '\n';
      }
    } else if (tune->parsed()) {
      tune_options.out_dir = tune_out;
      tune_options.lambda_override = tune_lambda;
      const lazyabc::TuneResult result =
          lazyabc::cmd_tune(records_path, tune_options);
      std::cout << "estimated relative efficiency: "
                << result.tuning.estimated_relative_efficiency << '\n'
                << "lambda: " << result.tuning.lambda << '\n'
                << "stat subset:";
      for (std::size_t idx : result.tuning.stat_subset) {
        std::cout << ' ' << idx;
      }
      std::cout << '\n' << "policy: " << result.policy_path.string() << '\n';
    } else if (compare->parsed()) {
      const lazyabc::CompareResult result =
          lazyabc::cmd_compare(standard_path, lazy_path);
      std::cout << result.table;
      if (compare_out) {
        std::ofstream out(*compare_out, std::ios::trunc);
        if (!out) {
          throw lazyabc::ConfigError("cannot write: " + *compare_out);
        }
        out << result.as_json.dump(2) << '\n';
      }
    } else if (report->parsed()) {
      const lazyabc::EfficiencyReport r = lazyabc::cmd_report(draws_path);
      std::cout << lazyabc::report_to_json(r).dump(2) << '\n';
    }
  } catch (const lazyabc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const lazyabc::TooManyFailuresError& e) {
    std::cerr << "aborted: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
