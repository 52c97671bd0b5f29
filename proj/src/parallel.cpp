#include "hecsolve/parallel.hpp"

#include <atomic>

#include <omp.h>

namespace hecsolve {

namespace {
std::atomic<int> g_workers{1};
}

int num_workers() noexcept { return g_workers.load(std::memory_order_relaxed); }

void set_num_workers(int n) {
  if (n < 1) throw Error("worker count must be >= 1");
  g_workers.store(n, std::memory_order_relaxed);
}

bool in_parallel_region() noexcept { return omp_in_parallel() != 0; }

}  // namespace hecsolve
