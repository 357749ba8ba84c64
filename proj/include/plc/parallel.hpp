#pragma once

#include <functional>

namespace plc {

/// Worker count: POISEUILLE_LC_THREADS if set and positive, else the
/// hardware concurrency (at least 1).
int worker_count();

/// Runs fn(i) for i in [0, n) on up to worker_count() threads. Each index is
/// processed exactly once; results must not depend on scheduling. Calls made
/// from inside a worker run serially. The first exception is rethrown after
/// all workers stop.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace plc
