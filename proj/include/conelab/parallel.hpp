#pragma once

#include <cstddef>
#include <functional>

namespace conelab {

/// Worker count from CONELAB_THREADS (unset or 0 means sequential).
int worker_count();

/// Runs body(i) for i in [0, n). Each index writes only its own output slot,
/// so results are identical for any worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace conelab
