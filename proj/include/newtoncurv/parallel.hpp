#pragma once

// Deterministic parallel helpers: a chunked index loop capped by the
// NEWTON_CURV_THREADS environment variable, and a fixed-order pairwise
// reduction so sums are bit-identical for every worker count.

#include <cstdlib>
#include <exception>
#include <functional>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace newtoncurv {

inline int worker_count() {
  if (const char* env = std::getenv("NEWTON_CURV_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1) return cap;
    } catch (...) {
    }
  }
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  return hw < 1 ? 1 : hw;
}

/// Runs fn(0..count-1), partitioned in contiguous blocks across workers.
/// The first exception thrown by any worker is rethrown after joining.
inline void parallel_for(std::size_t count,
                         const std::function<void(std::size_t)>& fn) {
  const int workers =
      static_cast<int>(std::min<std::size_t>(count, worker_count()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  const std::size_t chunk =
      (count + static_cast<std::size_t>(workers) - 1) /
      static_cast<std::size_t>(workers);
  for (int w = 0; w < workers; ++w) {
    const std::size_t begin = static_cast<std::size_t>(w) * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    pool.emplace_back([&, begin, end, w] {
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Sum with a fixed pairwise reduction tree independent of worker count.
inline double pairwise_sum(std::span<const double> v) {
  if (v.empty()) return 0.0;
  if (v.size() == 1) return v[0];
  if (v.size() <= 8) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace newtoncurv
