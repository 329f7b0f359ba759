#pragma once

#include <cstddef>
#include <functional>

namespace sparsalloc {

// Worker count: SPARSALLOC_THREADS when set to a positive integer, otherwise
// std::thread::hardware_concurrency() (at least 1).
std::size_t thread_budget();

// Calls body(i) for i in [0, n) across up to `threads` workers. Each index is
// visited exactly once; results must be written to per-index slots. The first
// exception thrown by a body is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, std::size_t threads = thread_budget());

}  // namespace sparsalloc
