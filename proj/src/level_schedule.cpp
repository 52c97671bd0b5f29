#include "hecsolve/level_schedule.hpp"

#include <algorithm>

namespace hecsolve {

namespace {

LevelSchedule schedule_from_levels(const std::vector<Index>& level, Index n_levels) {
  LevelSchedule s;
  s.n_levels = n_levels;
  s.level_ptr.assign(n_levels + 1, 0);
  for (Index l : level) ++s.level_ptr[l + 1];
  for (Index t = 0; t < n_levels; ++t) s.level_ptr[t + 1] += s.level_ptr[t];
  s.rows.resize(level.size());
  std::vector<Index> next(s.level_ptr.begin(), s.level_ptr.end() - 1);
  // ascending row order within each level
  for (Index i = 0; i < static_cast<Index>(level.size()); ++i) s.rows[next[level[i]]++] = i;
  return s;
}

LevelSchedule compute(const SparseCsr& a, Triangle orientation, bool strict) {
  require_dims(a.square(), "level schedule: matrix must be square");
  const Index n = a.n_rows;
  std::vector<Index> level(n, 0);
  Index n_levels = n > 0 ? 1 : 0;
  auto visit = [&](Index i) {
    Index l = 0;
    for (Index j : a.row_cols(i)) {
      const bool dep = orientation == Triangle::Lower ? j < i : j > i;
      const bool wrong = orientation == Triangle::Lower ? j > i : j < i;
      if (wrong && strict) throw FormatError("level schedule: matrix is not triangular");
      if (dep) l = std::max(l, level[j] + 1);
    }
    level[i] = l;
    n_levels = std::max(n_levels, l + 1);
  };
  if (orientation == Triangle::Lower) {
    for (Index i = 0; i < n; ++i) visit(i);
  } else {
    for (Index i = n - 1; i >= 0; --i) visit(i);
  }
  return schedule_from_levels(level, n_levels);
}

}  // namespace

LevelSchedule build_level_schedule(const SparseCsr& tri, Triangle orientation) {
  return compute(tri, orientation, true);
}

LevelSchedule build_level_schedule_strict(const SparseCsr& a, Triangle orientation) {
  return compute(a, orientation, false);
}

std::vector<Index> level_of_rows(const LevelSchedule& s, Index n) {
  std::vector<Index> lev(n, -1);
  for (Index t = 0; t < s.n_levels; ++t)
    for (Index i : s.level(t)) lev[i] = t;
  return lev;
}

}  // namespace hecsolve
