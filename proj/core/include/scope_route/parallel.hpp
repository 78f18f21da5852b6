#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace scope_route {

unsigned resolve_thread_count(unsigned requested);

/// Runs body(index, worker) for every index in [0, count) on a small worker
/// pool; `worker` < resolve_thread_count(threads) identifies the thread for
/// per-worker accumulators.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  const unsigned n =
      static_cast<unsigned>(std::min<std::size_t>(resolve_thread_count(threads),
                                                  std::max<std::size_t>(count, 1)));
  if (n <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i, 0);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned w = 0; w < n; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i, w);
    });
  for (auto& t : pool) t.join();
}

}  // namespace scope_route
