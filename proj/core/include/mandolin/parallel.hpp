#pragma once

#include <cstddef>
#include <functional>

namespace mandolin {

// Worker cap: MANDOLIN_THREADS if set (>=1), else hardware concurrency.
unsigned max_threads();

// Runs fn(i) for i in [0, n) on up to max_threads() workers. Work items are
// claimed from an atomic counter; callers must write results into
// preallocated, index-addressed slots to stay deterministic. Exceptions are
// captured and the first one rethrown after all workers join.
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

}  // namespace mandolin
