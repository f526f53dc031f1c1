#pragma once

#include <cstddef>
#include <functional>

namespace entroflow {

/// Worker count: hardware concurrency capped by the ENTROFLOW_THREADS
/// environment variable (values < 1 mean serial).
int worker_count();

/// Runs fn(i) for i in [0, n) across workers. Results must be written to
/// per-index slots; the caller reduces them in a fixed order afterwards, so
/// outcomes are deterministic regardless of the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace entroflow
