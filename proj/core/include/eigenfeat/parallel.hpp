#pragma once

#include <cstddef>
#include <functional>

namespace eigenfeat {

/// Worker count: EIGENFEAT_THREADS if set (>= 1), else hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Each index is processed exactly once; the
/// caller must make iterations independent and reduce results in index order
/// to stay deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace eigenfeat
