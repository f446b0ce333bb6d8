#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace flagwave {

// Runs fn(i) for i in [0, count) on up to `workers` threads. Callers write
// into per-index slots, so results never depend on the worker count.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  std::size_t w = static_cast<std::size_t>(std::max(1, workers));
  w = std::min(w, count);
  if (w <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < w; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace flagwave
