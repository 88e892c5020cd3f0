#pragma once

#include <cstddef>
#include <functional>

namespace umbilic {

/// Worker count: UMBILIC_LAB_THREADS if set and positive, else the hardware
/// concurrency (at least 1). An explicit override wins over both.
int worker_count();
void set_worker_override(int threads);

/// Runs fn(i) for i in [0, n) on up to worker_count() threads. Each index
/// is processed exactly once; results must be written to per-index slots.
/// The first exception thrown by any task is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace umbilic
