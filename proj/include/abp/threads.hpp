#pragma once

#include <cstddef>
#include <functional>

// Fork-join helper for the per-mode parallel regions. Tasks write to disjoint
// buffers and every reduction runs on the calling thread in a fixed order, so
// results are identical for any worker count (the determinism contract).
namespace abp {

// Resolution order: ABP_THREADS env var, then set_worker_count(), then
// hardware concurrency. Always at least 1.
int worker_count();
void set_worker_count(int n);  // n <= 0 restores the default

// Runs fn(i) for i in [0, n) on the shared pool; blocks until done.
// Exceptions from tasks are rethrown (first one wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace abp
