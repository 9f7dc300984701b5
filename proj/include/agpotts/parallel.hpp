#pragma once

#include <cstddef>
#include <functional>

namespace agpotts {

/// Environment variable holding the worker-thread count.
inline constexpr const char* kThreadsEnvVar = "AGPOTTS_THREADS";

/// Value of AGPOTTS_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_threads();

/// Run body(i) for i in [0, count) on up to worker_threads() threads. Tasks
/// must not share mutable state. The first exception thrown by any task is
/// rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace agpotts
