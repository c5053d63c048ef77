#pragma once

#include <cstddef>
#include <functional>

namespace floquetlab {

// Global worker count for column-parallel builds and ensemble sweeps.
// All parallel loops write to disjoint slots, so results do not depend on it.
void set_thread_count(int n);
int thread_count();

// Runs fn(i) for i in [0, n). Parallel when thread_count() > 1.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace floquetlab
