#pragma once

#include <functional>

namespace curvevar {

/// Worker count: CURVEVAR_THREADS if set (>= 1), else the hardware concurrency.
int worker_count();

/// Runs fn(i) for i in [0, n) on contiguous static chunks. Results must be
/// written per index, so the outcome does not depend on the thread count.
/// The exception raised at the smallest index is rethrown.
void parallel_for(int n, const std::function<void(int)>& fn);

} // namespace curvevar
