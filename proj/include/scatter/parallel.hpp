#pragma once

// Minimal row-parallel helper. Thread count comes from SCATTER_THREADS
// (0/unset = hardware concurrency).

#include <functional>

namespace scatter {

int scatter_threads();

// Invokes body(i) for i in [0, n), split across scatter_threads() threads.
// body must be safe to run concurrently for distinct i.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace scatter
