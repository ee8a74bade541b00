#pragma once

#include <cstddef>
#include <functional>

namespace aniso {

/// Worker count for parallel sections: hardware concurrency, capped by the
/// ANISO_THREADS environment variable when set to a positive integer.
std::size_t worker_count();

/// Runs fn(i) for i in [0, n) across worker threads. Iterations must write
/// only to their own output slots. Exceptions from workers are rethrown on
/// the calling thread (first one wins). Serial when n or workers is small.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace aniso
