#pragma once

#include <cstddef>
#include <functional>

namespace degen {

/// Process-wide worker count used when a call does not pass one. 0 means
/// hardware concurrency.
void set_default_workers(int workers);
int default_workers();

/// Runs body(i) for i in [0, count) on up to `workers` threads. Results must be
/// written by index, so the outcome does not depend on scheduling. The first
/// exception thrown by any body is rethrown after all threads join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  int workers = -1);

}  // namespace degen
