#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace sz {

// Worker count: min(hardware, SZ_THREADS if set). Always at least 1.
inline int thread_count() {
  unsigned hw = std::thread::hardware_concurrency();
  int n = hw == 0 ? 1 : static_cast<int>(hw);
  if (const char* env = std::getenv("SZ_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

// Static block partition of [0, n). fn(i) must be independent per index;
// results are deterministic because the index->work mapping never depends
// on the worker count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  int workers = thread_count();
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  std::vector<std::thread> pool;
  pool.reserve(w);
  std::exception_ptr error;
  std::atomic_flag error_claimed = ATOMIC_FLAG_INIT;
  for (std::size_t t = 0; t < w; ++t) {
    std::size_t lo = n * t / w, hi = n * (t + 1) / w;
    pool.emplace_back([lo, hi, &fn, &error, &error_claimed] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        if (!error_claimed.test_and_set()) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace sz
