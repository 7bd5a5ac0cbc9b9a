#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace sabrlab {

/// Worker count: SABRLAB_THREADS caps it, hardware concurrency is the default.
inline unsigned worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("SABRLAB_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
  }
  return hw;
}

/// Block-parallel loop over [0, n). Results must be written to per-index
/// slots; merge order does not matter.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const unsigned workers = std::min<std::size_t>(worker_count(), n == 0 ? 1 : n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace sabrlab
