#pragma once

#include <cstddef>
#include <functional>

namespace guplab {

/// Worker count used by node- and outcome-parallel loops. 1 disables threading.
void set_thread_count(unsigned count);
unsigned thread_count();

/// Runs body(i) for i in [0, count). Each index must write only its own slot;
/// callers reduce afterwards in index order so results do not depend on the
/// worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace guplab
