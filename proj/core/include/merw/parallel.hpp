#pragma once

#include <cstddef>
#include <functional>

namespace merw {

// Worker count resolution: explicit argument > MERWLAB_THREADS > hardware.
int default_thread_count();

// Runs fn(0..jobs-1) on up to `threads` workers. Callers own determinism:
// each job must write only to its own slot and draw randomness from its own
// seeded stream.
void parallel_for(std::size_t jobs, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace merw
