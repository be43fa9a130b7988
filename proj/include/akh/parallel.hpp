#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

#include "akh/linalg.hpp"

namespace akh::par {

/// Worker count: AKH_THREADS if set (>= 1), else hardware concurrency.
inline int thread_count() {
  if (const char* env = std::getenv("AKH_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

inline constexpr std::size_t kChunk = 4096;

/// Calls body(begin, end) over fixed-size chunks of [0, n).
template <class F>
void for_chunks(std::size_t n, F&& body) {
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  const int workers = static_cast<int>(std::min<std::size_t>(thread_count(), chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c * kChunk, std::min(n, (c + 1) * kChunk));
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < chunks; c += workers) body(c * kChunk, std::min(n, (c + 1) * kChunk));
    });
  for (auto& t : pool) t.join();
}

template <class F>
void parallel_for(std::size_t n, F&& f) {
  for_chunks(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) f(i);
  });
}

/// Sum of term(i) over [0, n); chunk partials are combined in chunk order, so
/// the result does not depend on the thread count.
template <class F>
double deterministic_sum(std::size_t n, F&& term) {
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);
  for_chunks(n, [&](std::size_t b, std::size_t e) {
    linalg::KahanSum s;
    for (std::size_t i = b; i < e; ++i) s.add(term(i));
    partial[b / kChunk] = s.value();
  });
  linalg::KahanSum total;
  for (double v : partial) total.add(v);
  return total.value();
}

}  // namespace akh::par
