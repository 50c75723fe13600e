#pragma once

#include <cstddef>
#include <functional>

namespace wco {

/// Worker count: WCO_THREADS if set to a positive integer, otherwise the hardware concurrency.
std::size_t thread_count();

/// Runs body(i) for i in [0, n) across up to thread_count() workers, in contiguous blocks.
/// Each index is processed by exactly one worker; callers write results to slot i only,
/// so the output does not depend on the number of workers.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Block variant: body(begin, end) receives a contiguous range; useful when a worker carries
/// state across consecutive indices.
void parallel_blocks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace wco
