#pragma once

namespace lazyabc {

// CPU time consumed by the calling thread, in seconds. Per-draw stage
// timings are measured with this clock and summed over workers; wall
// time is reported separately and never enters efficiency math.
double thread_cpu_seconds();

double wall_seconds();

}  // namespace lazyabc
