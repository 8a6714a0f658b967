#pragma once

#include <cstddef>
#include <functional>

namespace divscope {

/// Worker count used by every parallel section (>= 1). Defaults to the
/// hardware concurrency.
std::size_t thread_count() noexcept;
void set_thread_count(std::size_t n) noexcept;

/// Runs body(i) for i in [0, n) over thread_count() workers. Work items are
/// claimed dynamically, so body must not depend on which thread runs it.
/// The first exception thrown by any item is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Fixed row-block size for deterministic reductions; never derived from the
/// thread count.
inline constexpr std::size_t kReductionBlock = 64;

inline std::size_t block_count(std::size_t n) noexcept {
  return (n + kReductionBlock - 1) / kReductionBlock;
}

}  // namespace divscope
