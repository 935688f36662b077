#pragma once

#include <cstddef>
#include <functional>

namespace combilab {

/// Worker count from COMBILAB_THREADS, else hardware concurrency (at least 1).
/// The value never affects results, only wall time.
unsigned worker_count();

/// Calls body(i) for every i in [0, count) across worker_count() threads.
/// Indices are handed out dynamically; callers write into slot i and reduce in
/// index order afterwards. If any call throws, the exception from the lowest
/// failing index is rethrown once every index has run, matching the serial order.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace combilab
