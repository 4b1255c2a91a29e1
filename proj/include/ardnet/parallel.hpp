#pragma once

#include <cstddef>
#include <functional>

namespace ardnet {

/// Worker count from the ARDNET_THREADS environment variable (default: hardware
/// concurrency, at least 1). A value set with `set_thread_count` takes precedence.
int thread_count();
void set_thread_count(int threads);

/// Runs body(i) for i in [0, count) on up to `thread_count()` threads. Each index
/// is processed exactly once; callers write results into slot i so the outcome
/// does not depend on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace ardnet
