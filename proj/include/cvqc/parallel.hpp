#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace cvqc {

// Runs fn(begin, end) over [0, total) split into contiguous chunks, one per
// worker. Workers write to disjoint, index-addressed outputs, so the result
// is identical for any thread count.
template <typename Fn>
void parallel_for_chunks(long total, int threads, Fn&& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || total < 2) {
    fn(0L, total);
    return;
  }
  const long chunk = (total + threads - 1) / threads;
  std::vector<std::thread> pool;
  for (long begin = 0; begin < total; begin += chunk) {
    const long end = std::min(total, begin + chunk);
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace cvqc
