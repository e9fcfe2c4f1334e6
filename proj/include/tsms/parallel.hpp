#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace tsms {

/// Worker count: TSMS_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, count) on up to `workers` threads (0 selects
/// worker_count()). Indices are claimed dynamically; callers write results
/// into preallocated slots so the outcome does not depend on scheduling.
/// The first exception thrown by any body is rethrown after all threads join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, std::size_t workers = 0);

std::uint64_t splitmix64(std::uint64_t x);

/// 64-bit mix of (base seed, n, replication) so that cells are independent of
/// which other cells exist.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t n, std::uint64_t replication);

}  // namespace tsms
