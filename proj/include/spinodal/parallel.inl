#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace spinodal {

template <class Fn>
void parallel_rows(int rows, int threads, Fn&& fn) {
  threads = std::clamp(threads, 1, std::max(rows, 1));
  if (threads == 1) {
    fn(0, rows);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads - 1);
  const int chunk = (rows + threads - 1) / threads;
  for (int t = 1; t < threads; ++t) {
    const int begin = t * chunk;
    const int end = std::min(rows, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  fn(0, std::min(rows, chunk));
}

}  // namespace spinodal
