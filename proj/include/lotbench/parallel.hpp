#ifndef LOTBENCH_PARALLEL_HPP
#define LOTBENCH_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace lotbench {

inline int default_thread_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(begin, end) over contiguous chunks of [0, n) on `threads` workers.
// Results must be written to per-index slots so the outcome is independent
// of the thread count. The first exception thrown by any worker is rethrown.
template <typename Fn>
void parallel_chunks(std::size_t n, int threads, Fn&& fn) {
  if (threads <= 0) threads = default_thread_count();
  if (n == 0) return;
  const std::size_t worker_count =
      std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  if (worker_count <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(worker_count);
  const std::size_t chunk = (n + worker_count - 1) / worker_count;
  for (std::size_t w = 0; w < worker_count; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    workers.emplace_back([&fn, &errors, w, begin, end] {
      try {
        if (begin < end) fn(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace lotbench

#endif  // LOTBENCH_PARALLEL_HPP
