#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace fgl {

// Thread cap: FGL_THREADS env var, clamped to [1, hardware_concurrency].
inline unsigned thread_cap() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("FGL_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return std::min<unsigned>(static_cast<unsigned>(v), hw);
  }
  return hw;
}

// Runs body(chunk_index, begin, end) over fixed-size chunks of [0, n).
// The chunk decomposition depends only on (n, chunk_size), never on the
// thread count, so per-chunk results can be merged in index order for
// bitwise-reproducible reductions.
template <class Body>
void for_chunks(std::int64_t n, std::int64_t chunk_size, Body&& body) {
  if (n <= 0) return;
  const std::int64_t n_chunks = (n + chunk_size - 1) / chunk_size;
  const unsigned n_threads =
      std::min<unsigned>(thread_cap(), static_cast<unsigned>(n_chunks));

  auto run_chunk = [&](std::int64_t c) {
    const std::int64_t b = c * chunk_size;
    const std::int64_t e = std::min(n, b + chunk_size);
    body(c, b, e);
  };

  if (n_threads <= 1) {
    for (std::int64_t c = 0; c < n_chunks; ++c) run_chunk(c);
    return;
  }

  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const std::int64_t c = next.fetch_add(1);
        if (c >= n_chunks || failed.load()) break;
        try {
          run_chunk(c);
        } catch (...) {
          bool expected = false;
          if (failed.compare_exchange_strong(expected, true))
            first_error = std::current_exception();
          break;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace fgl
