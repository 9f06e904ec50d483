#pragma once

#include <cstddef>
#include <functional>

namespace polyscat {

// Worker count used by parallel_for. Defaults to 1; the CLI sets it from
// POLYSCAT_THREADS.
void set_thread_count(unsigned n);
unsigned thread_count();

// Calls fn(begin, end) over disjoint chunks of [0, n). Results must be
// written to per-index slots so the outcome is independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace polyscat
