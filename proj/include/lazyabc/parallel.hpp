#pragma once

#include <cstddef>
#include <functional>

namespace lazyabc {

// Runs body(i) for i in [0, n) on `workers` threads (0 = hardware
// width). Bodies must be independent; the engines derive all of their
// randomness from (master_seed, iteration), so any schedule produces
// the same result. The first exception thrown by a body is rethrown
// after all workers join.
void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace lazyabc
