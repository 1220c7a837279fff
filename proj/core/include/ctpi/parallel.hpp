// parallel.hpp -- minimal deterministic work-sharing helper.
//
// Tasks are independent and write to preallocated slots indexed by task id,
// so results are bitwise identical for any thread count.
#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ctpi {

namespace detail {
inline std::atomic<int>& max_threads_slot() {
  static std::atomic<int> v{0};
  return v;
}
}  // namespace detail

// Global worker cap shared by all parallel loops.  0 means "use hardware".
inline void set_max_threads(int n) { detail::max_threads_slot() = n < 0 ? 0 : n; }

inline int max_threads() {
  int v = detail::max_threads_slot().load();
  if (v > 0) return v;
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  if (n == 0) return;
  std::size_t workers = static_cast<std::size_t>(max_threads());
  if (workers > n) workers = n;
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace ctpi
