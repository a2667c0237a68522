#pragma once

#include <cstddef>
#include <functional>

namespace suplab {

/// Worker count used when a call passes workers <= 0: the last value given to
/// set_default_workers, else SUPLAB_WORKERS from the environment, else the hardware concurrency.
int default_workers();
/// n <= 0 restores the environment/hardware default.
void set_default_workers(int n);

/// Runs body(i) for i in [0, n). Index i goes to worker i mod workers, so results written to
/// slot i do not depend on scheduling. If several calls throw, the exception from the
/// smallest index is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int workers = 0);

}  // namespace suplab
