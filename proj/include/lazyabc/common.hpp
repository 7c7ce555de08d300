#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace lazyabc {

using Rng = std::mt19937_64;

using ParamVector = std::vector<double>;
using SummaryVector = std::vector<double>;

// Error taxonomy. ConfigError and TooManyFailuresError map to the CLI
// exit codes 2 and 3; invalid arguments use std::invalid_argument.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SimulationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TooManyFailuresError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateSampleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PolicyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedOracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Every random draw in a run comes from a stream keyed by
// (master_seed, iteration, purpose). Iterations never share a stream,
// so results are a pure function of (config, master_seed) and cannot
// depend on worker count or scheduling order. Keeping the stopping
// decision on its own stream means the continuation stage sees the
// same randomness whether or not a stopping rule is in play.
enum class StreamPurpose : std::uint64_t {
  Proposal = 1,
  InitialStage = 2,
  StoppingDecision = 3,
  ContinuationStage = 4,
  Observed = 5,
};

std::uint64_t mix_seed(std::uint64_t master_seed, std::uint64_t iteration,
                       std::uint64_t purpose);

Rng iteration_rng(std::uint64_t master_seed, std::uint64_t iteration,
                  StreamPurpose purpose);

}  // namespace lazyabc
