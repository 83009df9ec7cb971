#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace hgks {

/// Worker count used by parallel_for; 1 runs inline.
int thread_count();
void set_thread_count(int n);

/// Runs fn(i) for i in [0, n) over contiguous blocks. fn must only write to
/// per-index data.
template <class Fn>
void parallel_for(int n, Fn&& fn) {
  const int workers = std::min(thread_count(), std::max(1, n / 64));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const int lo = static_cast<int>(static_cast<long long>(n) * w / workers);
    const int hi = static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
    pool.emplace_back([lo, hi, &fn] {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace hgks
