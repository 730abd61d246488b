#ifndef TALK_PARALLEL_HPP
#define TALK_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace talk {

// Number of worker threads for grid evaluations: the RENEGE_TALK_THREADS
// environment variable, where 0 or unset means sequential.
std::size_t grid_threads();

// Runs fn(0..n-1), striped across grid_threads() workers. Each index must
// write only its own output slot; assembly order is by index and therefore
// deterministic. Exceptions from workers are rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace talk

#endif  // TALK_PARALLEL_HPP
