#pragma once

#include <cstddef>
#include <functional>

namespace nomsdm {

/// Worker count: `requested` if non-zero, else NOMSDM_THREADS, else the
/// hardware concurrency (at least 1). Throws InvalidInput on a malformed
/// NOMSDM_THREADS value.
unsigned resolve_threads(unsigned requested = 0);

/// Calls body(i) for every i in [0, count) on up to `threads` workers.
/// Work is split into contiguous index blocks; the first exception thrown
/// by any call is rethrown after all workers finish.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

} // namespace nomsdm
