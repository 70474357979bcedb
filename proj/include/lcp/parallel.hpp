#pragma once

#include <functional>

namespace lcp {

// Runs fn(0..count-1) on up to `threads` workers. Work items are claimed in
// index order; callers write results into per-index slots, so the outcome
// does not depend on scheduling. The exception of the lowest failing index
// is rethrown after all workers finish.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace lcp
