#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace fragsim {

/// Runs fn(replica) for replica in [0, count) on up to `jobs` threads and
/// returns the results indexed by replica, independent of scheduling.
/// The first exception thrown by any worker is rethrown after all workers join.
template <class Fn>
auto run_replicas(std::uint64_t count, unsigned jobs, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, std::uint64_t>> {
  using Result = std::invoke_result_t<Fn&, std::uint64_t>;
  std::vector<Result> results(count);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(jobs, 1u), std::max<std::uint64_t>(count, 1)));
  if (workers <= 1) {
    for (std::uint64_t r = 0; r < count; ++r) {
      results[r] = fn(r);
    }
    return results;
  }

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::uint64_t r = next.fetch_add(1, std::memory_order_relaxed);
      if (r >= count) {
        return;
      }
      try {
        results[r] = fn(r);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
        next.store(count, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned i = 0; i < workers; ++i) {
    pool.emplace_back(worker);
  }
  for (auto& thread : pool) {
    thread.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  return results;
}

}  // namespace fragsim
