#pragma once

#include <cstddef>
#include <functional>

namespace bgap {

/// Caps the number of worker threads used by restarts and enumerations.
/// 0 restores the default (hardware concurrency).
void set_max_threads(unsigned count);
unsigned max_threads();

/// Runs body(i) for i in [0, count). Work is split into static contiguous
/// ranges, so results written by index are independent of the thread count.
/// The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace bgap
