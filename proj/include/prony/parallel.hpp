#ifndef PRONY_PARALLEL_HPP
#define PRONY_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace prony {

/// Cap on worker threads used by grid evaluation; 0 means hardware concurrency.
void set_max_threads(unsigned count);
unsigned max_threads();

/// Runs body(begin, end) over contiguous chunks of [0, count). Each chunk
/// writes only to its own output range, so results do not depend on the
/// thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

} // namespace prony

#endif
