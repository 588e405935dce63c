#pragma once

#include <cstddef>
#include <functional>

namespace levimax {

/// Worker count: LEVIMAX_THREADS if set and positive, else hardware concurrency.
unsigned sweep_threads();

/// Runs body(i) for i in [0, count) on up to sweep_threads() threads. Each index is
/// visited exactly once; results must be written to per-index slots. The first
/// exception thrown by any body is rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace levimax
