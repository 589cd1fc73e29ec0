#pragma once

#include <cstddef>
#include <functional>

namespace entrograph {

/// Number of worker threads for `tasks` independent jobs: hardware
/// concurrency, capped by the ENTROGRAPH_THREADS environment variable.
std::size_t worker_count(std::size_t tasks);

/// Runs body(i) for i in [0, n) on up to worker_count(n) threads. Each index
/// runs exactly once; the first exception thrown is rethrown after all
/// workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace entrograph
