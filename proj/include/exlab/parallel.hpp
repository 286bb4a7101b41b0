#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace exlab {

/// Worker-pool size used by parallel scans; 0 picks the hardware concurrency.
void set_default_threads(int n);
int default_threads();

/// Runs fn(0..n-1), each index exactly once. Callers keep results in
/// per-index slots and reduce in index order afterwards, so the outcome does
/// not depend on the thread count.
inline void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn,
                         int threads = 0) {
  if (threads <= 0) threads = default_threads();
  if (threads <= 1 || n <= 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const int use = int(std::min<std::int64_t>(threads, n));
  pool.reserve(std::size_t(use - 1));
  for (int t = 1; t < use; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

}  // namespace exlab
