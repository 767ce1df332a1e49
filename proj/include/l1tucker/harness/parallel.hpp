#pragma once

#include <cstddef>
#include <functional>

namespace l1tucker::harness {

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 = one per
/// hardware thread). Work items must write to disjoint, index-keyed slots;
/// the first exception thrown by any item is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace l1tucker::harness
