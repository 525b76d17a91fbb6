#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace cayleyci {

// 0 means one worker per hardware thread.
inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) {
    return requested;
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

// Calls body(chunk, begin, end) over a static partition of [0, n) into at
// most `threads` contiguous chunks. Chunk boundaries depend only on n and the
// thread count, and callers merge per-chunk results in chunk order, so
// results do not depend on scheduling.
template <class Body>
void parallel_chunks(std::size_t n, unsigned threads, Body&& body) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(resolve_threads(threads), n));
  if (workers == 1) {
    body(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t step = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * step;
    const std::size_t end = std::min(n, begin + step);
    if (begin >= end) {
      break;
    }
    pool.emplace_back([&body, w, begin, end] { body(w, begin, end); });
  }
}

}  // namespace cayleyci
