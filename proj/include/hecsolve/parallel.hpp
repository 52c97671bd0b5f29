#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <vector>

#include "hecsolve/common.hpp"

namespace hecsolve {

/// Number of workers used by row/element-parallel kernels. Defaults to 1.
int num_workers() noexcept;
void set_num_workers(int n);
/// True when called from inside a worker region; nested regions run inline.
bool in_parallel_region() noexcept;

/// RAII override of the worker count, restored on scope exit.
class WorkerScope {
 public:
  explicit WorkerScope(int n) : saved_(num_workers()) { set_num_workers(n); }
  ~WorkerScope() { set_num_workers(saved_); }
  WorkerScope(const WorkerScope&) = delete;
  WorkerScope& operator=(const WorkerScope&) = delete;

 private:
  int saved_;
};

/// Collects the first exception thrown inside a parallel region so it can be
/// rethrown on the calling thread.
class ExceptionSink {
 public:
  template <class Fn>
  void run(Fn&& fn) noexcept {
    try {
      fn();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu_);
      if (!first_) first_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (first_) std::rethrow_exception(first_);
  }

 private:
  std::mutex mu_;
  std::exception_ptr first_;
};

/// Static contiguous split of [0, n) across the current workers. Each worker
/// sees one [begin, end) range; ranges never overlap.
template <class Fn>
void parallel_for(std::ptrdiff_t n, Fn&& fn) {
  const int w = num_workers();
  if (w <= 1 || n < 2 * w || in_parallel_region()) {
    if (n > 0) fn(std::ptrdiff_t{0}, n);
    return;
  }
  ExceptionSink sink;
#pragma omp parallel for schedule(static, 1) num_threads(w)
  for (int t = 0; t < w; ++t) {
    const std::ptrdiff_t b = n * t / w;
    const std::ptrdiff_t e = n * (t + 1) / w;
    if (b < e) sink.run([&] { fn(b, e); });
  }
  sink.rethrow();
}

/// Runs fn(i) for every task index; used for block-level (outer) parallelism.
template <class Fn>
void parallel_tasks(std::ptrdiff_t n_tasks, Fn&& fn) {
  const int w = num_workers();
  if (w <= 1 || n_tasks <= 1 || in_parallel_region()) {
    for (std::ptrdiff_t i = 0; i < n_tasks; ++i) fn(i);
    return;
  }
  ExceptionSink sink;
#pragma omp parallel for schedule(dynamic, 1) num_threads(w)
  for (std::ptrdiff_t i = 0; i < n_tasks; ++i) sink.run([&] { fn(i); });
  sink.rethrow();
}

/// Block size of the fixed reduction tree. Partial sums are formed over
/// blocks of this many elements and combined pairwise, so the result does
/// not depend on the worker count.
inline constexpr std::ptrdiff_t kReduceBlock = 2048;

/// Deterministic sum of block_sum(b, e) over fixed blocks of [0, n).
template <class BlockFn>
Real deterministic_reduce(std::ptrdiff_t n, BlockFn&& block_sum) {
  if (n <= 0) return 0.0;
  const std::ptrdiff_t n_blocks = (n + kReduceBlock - 1) / kReduceBlock;
  std::vector<Real> partial(static_cast<std::size_t>(n_blocks));
  parallel_for(n_blocks, [&](std::ptrdiff_t b0, std::ptrdiff_t b1) {
    for (std::ptrdiff_t b = b0; b < b1; ++b) {
      const std::ptrdiff_t lo = b * kReduceBlock;
      const std::ptrdiff_t hi = std::min(n, lo + kReduceBlock);
      partial[static_cast<std::size_t>(b)] = block_sum(lo, hi);
    }
  });
  // pairwise combine
  for (std::size_t width = 1; width < partial.size(); width *= 2) {
    for (std::size_t i = 0; i + width < partial.size(); i += 2 * width) {
      partial[i] += partial[i + width];
    }
  }
  return partial[0];
}

}  // namespace hecsolve
