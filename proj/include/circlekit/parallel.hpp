#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace circlekit {

// Process-wide worker count. Initialised from CIRCLEKIT_THREADS when set, otherwise 1.
int default_threads();
void set_default_threads(int threads);

// Runs body(i) for every i in [0, count). Work items are claimed in blocks by a fixed set of
// workers; results must be written to per-item slots so that reductions stay order-fixed and
// independent of the thread count. If items throw, the exception of the lowest failing index
// is rethrown after all workers finish.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace circlekit
