#include "lazyabc/common.hpp"

namespace lazyabc {

namespace {

// SplitMix64 finalizer; full-period, passes the usual avalanche tests.
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t master_seed, std::uint64_t iteration,
                       std::uint64_t purpose) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ iteration);
  h = splitmix64(h ^ purpose);
  return h;
}

Rng iteration_rng(std::uint64_t master_seed, std::uint64_t iteration,
                  StreamPurpose purpose) {
  return Rng(mix_seed(master_seed, iteration,
                      static_cast<std::uint64_t>(purpose)));
}

}  // namespace lazyabc
