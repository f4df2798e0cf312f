#pragma once

#include <cstddef>
#include <functional>

namespace mglcop {

// Worker count: MGL_THREADS if set, otherwise the hardware concurrency.
unsigned thread_count();

// Calls body(i) for i in [0, n) across worker threads. The first exception
// thrown by any task is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mglcop
