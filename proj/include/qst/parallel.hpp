#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace qst {

/// Runs body(0..n-1) across n_workers threads (0 = hardware concurrency).
/// Work items are independent and written back by index by the caller, so
/// results do not depend on the worker count. If any item throws, every
/// item still runs and the exception with the lowest index is rethrown.
inline void parallel_for(long n, int n_workers,
                         const std::function<void(long)>& body) {
  if (n <= 0) return;
  int workers = n_workers > 0
                    ? n_workers
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (static_cast<long>(workers) > n) workers = static_cast<int>(n);

  std::mutex failures_mutex;
  std::vector<std::pair<long, std::exception_ptr>> failures;

  auto guarded = [&](long i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(failures_mutex);
      failures.emplace_back(i, std::current_exception());
    }
  };

  if (workers == 1) {
    for (long i = 0; i < n; ++i) guarded(i);
  } else {
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (long i = next.fetch_add(1); i < n; i = next.fetch_add(1))
          guarded(i);
      });
    for (auto& t : pool) t.join();
  }

  if (!failures.empty()) {
    auto lowest = failures.front();
    for (const auto& f : failures)
      if (f.first < lowest.first) lowest = f;
    std::rethrow_exception(lowest.second);
  }
}

}  // namespace qst
