#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace scan2d {

/// Runs fn(begin, end) over [0, n) split into contiguous chunks, one per
/// worker. Work assignment depends only on (n, threads), never on timing,
/// and all writes are to disjoint regions, so results are deterministic.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  std::size_t workers = threads <= 1 ? 1 : std::min<std::size_t>(threads, n);
  if (workers == 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t b = w * chunk;
    std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace scan2d
