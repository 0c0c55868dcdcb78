#pragma once

#include <cstddef>
#include <functional>

namespace sqznb {

// Worker count for internal loops: hardware concurrency, capped by the
// SQZNB_THREADS environment variable when it holds a positive integer.
std::size_t worker_count();

// Calls body(begin, end) on disjoint contiguous chunks covering [0, n).
// Chunks run concurrently; body must only touch its own index range.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t workers = 0);

}  // namespace sqznb
