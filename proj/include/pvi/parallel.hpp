#pragma once

// Deterministic parallel loop: contiguous index chunks, disjoint writes,
// no reductions. Thread count resolves as flag > PVI_THREADS > 1.

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace pvi {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PVI_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

template <typename F>
void parallel_for(long n, int nthreads, F&& f) {
  if (nthreads <= 1 || n < 2 * nthreads) {
    for (long i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  const long chunk = (n + nthreads - 1) / nthreads;
  for (int t = 0; t < nthreads; ++t) {
    const long b = t * chunk, e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&f, b, e] {
      for (long i = b; i < e; ++i) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace pvi
