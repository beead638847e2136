#pragma once

// Minimal deterministic data parallelism. Work is cut into fixed chunks whose
// boundaries do not depend on the thread count, so reductions combine partial
// results in the same order on every run.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace aperiodic {

/// Thread cap from APERIODIC_THREADS, else the hardware concurrency.
inline unsigned thread_count() {
  if (const char* env = std::getenv("APERIODIC_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1U : hw;
}

/// Calls body(begin, end) for consecutive chunks of [0, n).
template <class Body>
void parallel_chunks(std::size_t n, std::size_t chunk, Body&& body) {
  if (n == 0) return;
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t chunks = (n + chunk - 1) / chunk;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c * chunk, std::min(n, (c + 1) * chunk));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        body(c * chunk, std::min(n, (c + 1) * chunk));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned i = 1; i < workers; ++i) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// out[i] = f(i) for i in [0, n).
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& f, std::size_t chunk = 64) {
  std::vector<T> out(n);
  parallel_chunks(n, chunk, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = f(i);
  });
  return out;
}

/// Sum of f(i) over [0, n), combined chunk by chunk in index order.
template <class T, class F>
T parallel_sum(std::size_t n, F&& f, std::size_t chunk = 4096) {
  if (n == 0) return T{};
  const std::size_t chunks = (n + chunk - 1) / chunk;
  std::vector<T> partial(chunks, T{});
  parallel_chunks(chunks, 1, [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c) {
      T acc{};
      const std::size_t lo = c * chunk;
      const std::size_t hi = std::min(n, lo + chunk);
      for (std::size_t i = lo; i < hi; ++i) acc += f(i);
      partial[c] = acc;
    }
  });
  T total{};
  for (const auto& p : partial) total += p;
  return total;
}

}  // namespace aperiodic
