#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace stochedit::detail {

// Splits [0, n) into at most `threads` contiguous chunks and runs
// fn(chunk, begin, end) for each, one thread per chunk. The chunking depends
// only on n and threads, so per-chunk results merged in chunk order are
// deterministic.
template <typename Fn>
std::size_t parallel_chunks(std::size_t n, unsigned threads, Fn&& fn) {
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(threads == 0 ? 1 : threads, n));
  if (chunks == 1) {
    fn(std::size_t{0}, std::size_t{0}, n);
    return 1;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(chunks);
  pool.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = n * c / chunks;
    const std::size_t end = n * (c + 1) / chunks;
    pool.emplace_back([&, c, begin, end] {
      try {
        fn(c, begin, end);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return chunks;
}

inline std::size_t chunk_count(std::size_t n, unsigned threads) {
  return std::max<std::size_t>(1, std::min<std::size_t>(threads == 0 ? 1 : threads, n));
}

}  // namespace stochedit::detail
