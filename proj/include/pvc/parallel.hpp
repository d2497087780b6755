#ifndef PVC_PARALLEL_HPP
#define PVC_PARALLEL_HPP

#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pvc {

/// Runs fn(i) for i in [0, n) on up to `workers` threads in fixed blocks.
/// Results must go to per-index slots; the first exception is rethrown after
/// all threads join.
template <class F>
void parallel_for(int n, int workers, F&& fn) {
  if (n <= 0) return;
  if (workers <= 1 || n == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  const int nthreads = std::min(workers, n);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) {
    const int begin = static_cast<int>(static_cast<long long>(n) * t / nthreads);
    const int end = static_cast<int>(static_cast<long long>(n) * (t + 1) / nthreads);
    threads.emplace_back([&, begin, end] {
      try {
        for (int i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (std::thread& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace pvc

#endif
