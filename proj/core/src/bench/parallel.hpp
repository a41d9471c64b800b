#ifndef ANYTIME_SRC_BENCH_PARALLEL_HPP
#define ANYTIME_SRC_BENCH_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace anytime::bench::detail {

inline std::size_t resolve_threads(std::size_t requested, std::size_t jobs) {
  std::size_t n = requested != 0 ? requested : std::max<std::size_t>(1, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(n, jobs));
}

// Calls fn(i) for i in [0, jobs) on a small worker pool. The first exception
// thrown by any job is rethrown after all workers have stopped.
template <class Fn>
void parallel_for(std::size_t jobs, std::size_t threads, Fn&& fn) {
  if (jobs == 0) return;
  threads = resolve_threads(threads, jobs);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace anytime::bench::detail

#endif  // ANYTIME_SRC_BENCH_PARALLEL_HPP
