#pragma once

#include <cstdint>
#include <functional>

namespace mlab {

// Worker count for parallel sweeps: hardware_concurrency capped by the
// MLAB_THREADS environment variable (values < 1 mean serial).
int worker_count();

// Dynamic-block parallel loop over [begin, end). The body must only touch
// state owned by index i (or be otherwise race-free).
void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t)>& body);

// Max-reduction over [begin, end); deterministic since max is order-free.
double parallel_max(std::int64_t begin, std::int64_t end,
                    const std::function<double(std::int64_t)>& per_index);

}  // namespace mlab
