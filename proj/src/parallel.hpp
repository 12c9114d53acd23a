#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace wander {

template <class F>
void parallel_for(std::size_t n, F&& body) {
  std::size_t w = std::size_t(worker_count());
  if (w <= 1 || n < 64) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  w = std::min(w, n);
  std::vector<std::thread> pool;
  std::size_t chunk = (n + w - 1) / w;
  for (std::size_t t = 0; t < w; ++t) {
    std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace wander
