#pragma once

#include <cstddef>
#include <functional>

namespace prodlaw {

/// Worker count: PRODLAW_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
unsigned worker_count();

/// Runs fn(i) for i in [0, count) on up to worker_count() threads.  Indices
/// are claimed dynamically; results must be written to slots keyed by i.
/// The first exception thrown by any task is rethrown after all threads join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace prodlaw
