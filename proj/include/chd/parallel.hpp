#pragma once

#include <cstddef>
#include <functional>

namespace chd {

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = hardware
/// concurrency). Calls made from inside a worker run serially, so nested
/// use does not oversubscribe. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t threads = 0);

}  // namespace chd
