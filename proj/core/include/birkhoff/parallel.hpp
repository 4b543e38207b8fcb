#pragma once

#include <cstddef>
#include <functional>

namespace birkhoff {

// Number of worker threads used by batch evaluations. 0 means hardware
// concurrency. Results never depend on this value: every parallel loop in the
// library writes to disjoint, index-addressed output slots.
void set_thread_count(unsigned n);
unsigned thread_count();

// Calls body(i) for i in [begin, end), split into contiguous chunks.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

}  // namespace birkhoff
