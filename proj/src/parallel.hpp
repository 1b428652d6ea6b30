#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace tr2l::detail {

/// Calls fn(i) for i in [0, n) on a few worker threads. The first exception
/// thrown by any call is rethrown on the calling thread.
template <typename Fn> void parallel_for(std::size_t n, Fn &&fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            if (!failed.exchange(true))
              error = std::current_exception();
          }
        }
      });
    }
  }
  if (error)
    std::rethrow_exception(error);
}

} // namespace tr2l::detail
