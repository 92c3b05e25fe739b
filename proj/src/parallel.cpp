#include "gafbmo/parallel.hpp"

#include <fftw3.h>

#include <atomic>
#include <mutex>

namespace gafbmo {

namespace {
std::atomic<int> g_threads{0};
}

void set_default_threads(int threads) { g_threads = std::max(1, threads); }

int default_threads() {
  const int t = g_threads.load();
  if (t > 0) return t;
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail {

void prepare_workers() {
  static std::once_flag once;
  std::call_once(once, [] { fftw_make_planner_thread_safe(); });
}

}  // namespace detail

}  // namespace gafbmo
