#pragma once

#include <span>
#include <vector>

#include "hecsolve/csr.hpp"

namespace hecsolve {

enum class Triangle { Lower, Upper };

/// Rows grouped into dependency levels. Rows of level t occupy
/// rows[level_ptr[t] .. level_ptr[t+1]) in ascending order; every row of
/// level t depends only on rows of levels < t.
struct LevelSchedule {
  Index n_levels = 0;
  std::vector<Index> level_ptr{0};
  std::vector<Index> rows;

  std::span<const Index> level(Index t) const {
    return {rows.data() + level_ptr[t], static_cast<std::size_t>(level_ptr[t + 1] - level_ptr[t])};
  }
};

/// Levels of a triangular matrix: l(i) = 1 + max l(j) over off-diagonal
/// entries (j < i for Lower, j > i for Upper). Throws FormatError if an
/// entry lies in the other triangle.
LevelSchedule build_level_schedule(const SparseCsr& tri, Triangle orientation);

/// As above, reading only the strict triangle of a general square matrix
/// (entries of the opposite triangle are ignored).
LevelSchedule build_level_schedule_strict(const SparseCsr& a, Triangle orientation);

/// Per-row level (0-based) for a schedule.
std::vector<Index> level_of_rows(const LevelSchedule& s, Index n);

/// Rows per level below which a level is processed by one worker.
inline constexpr Index kParallelLevelMin = 256;

/// Runs row_fn(i) for every row, level by level, parallel within a level.
template <class RowFn>
void for_each_level_row(const LevelSchedule& s, RowFn&& row_fn);

}  // namespace hecsolve

#include "hecsolve/parallel.hpp"

namespace hecsolve {

template <class RowFn>
void for_each_level_row(const LevelSchedule& s, RowFn&& row_fn) {
  for (Index t = 0; t < s.n_levels; ++t) {
    const auto rows = s.level(t);
    const auto count = static_cast<std::ptrdiff_t>(rows.size());
    if (count < kParallelLevelMin || num_workers() <= 1) {
      for (Index i : rows) row_fn(i);
      continue;
    }
    parallel_for(count, [&](std::ptrdiff_t b, std::ptrdiff_t e) {
      for (auto k = b; k < e; ++k) row_fn(rows[k]);
    });
  }
}

}  // namespace hecsolve
