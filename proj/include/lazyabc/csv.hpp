#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "lazyabc/models/triple_summary.hpp"
#include "lazyabc/tuning.hpp"

namespace lazyabc {

// Shortest representation that parses back to the identical double, so
// every CSV round-trips losslessly.
std::string format_double(double value);
double parse_double(std::string_view text);

// Draws CSV. Columns:
//   index, theta_1..theta_k, weight, l_abc, a, stopped_early,
//   t1_seconds, t2_seconds, seed_index
// Failed draws carry no statistical payload and are not written; they
// are accounted for in the run report instead.
void write_draws_csv(const std::filesystem::path& path,
                     const std::vector<WeightedDraw>& draws,
                     std::size_t param_dim);

struct DrawsFile {
  std::vector<WeightedDraw> draws;
  std::size_t param_dim = 0;
};
DrawsFile read_draws_csv(const std::filesystem::path& path);

// Training-records CSV. Columns:
//   index, theta_1..theta_k, phi_1..phi_m, l_abc, t1_seconds,
//   t2_seconds, prior_density, proposal_density, seed_index
void write_training_csv(const std::filesystem::path& path,
                        const std::vector<TrainingRecord>& records,
                        std::size_t param_dim, std::size_t phi_dim);

struct TrainingFile {
  std::vector<TrainingRecord> records;
  std::size_t param_dim = 0;
  std::size_t phi_dim = 0;
};
TrainingFile read_training_csv(const std::filesystem::path& path);

// Observed-dataset CSV for the triple-summary model: a header row of
// location ids, then one row per year.
YearlyData read_yearly_csv(const std::filesystem::path& path);
void write_yearly_csv(const std::filesystem::path& path, const YearlyData& data);

}  // namespace lazyabc
