#pragma once

#include <cstddef>
#include <functional>

namespace qcbnorm {

/// Worker count for the task pool: QCBNORM_THREADS if set, else hardware concurrency.
std::size_t worker_count();

/// Runs fn(0..n-1) on up to worker_count() threads. Nested calls run serially on
/// the calling thread. If tasks throw, the exception of the lowest index is rethrown
/// after all tasks finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace qcbnorm
