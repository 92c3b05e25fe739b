#pragma once

#include "gafbmo/core.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gafbmo {

void set_default_threads(int threads);
int default_threads();

namespace detail {
inline thread_local bool in_parallel_region = false;
/// One-time setup before worker threads exist (transform planner locking).
void prepare_workers();
}

/// Calls fn(i) for i in [0, n) over a fixed contiguous partition.
/// Results must be written to per-index slots; reductions happen afterwards
/// in index order, so output does not depend on the thread count.
template <typename Fn>
void parallel_for(Index n, Fn&& fn, int threads = default_threads()) {
  if (n <= 0) return;
  const Index workers = std::max<Index>(1, std::min<Index>(threads, n));
  if (workers == 1 || detail::in_parallel_region) {
    for (Index i = 0; i < n; ++i) fn(i);
    return;
  }
  detail::prepare_workers();
  std::exception_ptr failure;
  std::mutex guard;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (Index w = 0; w < workers; ++w) {
    const Index lo = n * w / workers;
    const Index hi = n * (w + 1) / workers;
    pool.emplace_back([&, lo, hi] {
      detail::in_parallel_region = true;
      try {
        for (Index i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(guard);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace gafbmo
