#include "hecsolve/ilu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hecsolve {

FillLevels ilu_symbolic(const SparseCsr& a, Index k) {
  require_dims(a.square(), "ilu_symbolic: matrix must be square");
  if (k < 0) throw Error("ilu_symbolic: fill level must be >= 0");
  a.validate();
  const Index n = a.n_rows;
  constexpr Index kEnd = std::numeric_limits<Index>::max();

  FillLevels f;
  f.n = n;
  f.k = k;
  f.row_ptr.assign(n + 1, 0);
  std::vector<Offset> upper_begin(n);  // first entry with column > row

  // Sorted linked list of the working row; lev holds levels of its members.
  std::vector<Index> next(n, kEnd);
  std::vector<Index> lev(n, 0);
  std::vector<char> member(n, 0);

  for (Index i = 0; i < n; ++i) {
    const auto cols = a.row_cols(i);
    if (!std::binary_search(cols.begin(), cols.end(), i))
      throw ZeroPivotError("ilu_symbolic: missing diagonal in row " + std::to_string(i), i);

    Index head = kEnd;
    Index tail = kEnd;
    for (Index j : cols) {
      member[j] = 1;
      lev[j] = 0;
      next[j] = kEnd;
      if (head == kEnd) head = j;
      else next[tail] = j;
      tail = j;
    }

    for (Index p = head; p < i; p = next[p]) {
      const Index lip = lev[p];
      if (lip > k) continue;
      Index cursor = p;  // insertion point search starts here; columns only grow
      for (Offset q = upper_begin[p]; q < f.row_ptr[p + 1]; ++q) {
        const Index j = f.col_idx[q];
        const Index fill = lip + f.level[q] + 1;
        if (fill > k) continue;
        if (member[j]) {
          lev[j] = std::min(lev[j], fill);
          continue;
        }
        while (next[cursor] < j) cursor = next[cursor];
        next[j] = next[cursor];
        next[cursor] = j;
        member[j] = 1;
        lev[j] = fill;
        cursor = j;
      }
    }

    for (Index j = head; j != kEnd; j = next[j]) {
      f.col_idx.push_back(j);
      f.level.push_back(lev[j]);
      member[j] = 0;
    }
    f.row_ptr[i + 1] = static_cast<Offset>(f.col_idx.size());
    const auto b = f.col_idx.begin() + f.row_ptr[i];
    const auto e = f.col_idx.begin() + f.row_ptr[i + 1];
    upper_begin[i] = (std::upper_bound(b, e, i) - f.col_idx.begin());
  }
  return f;
}

namespace {

IluFactors factorize_once(const SparseCsr& a, const FillLevels& fills, Real diag_shift) {
  const Index n = a.n_rows;
  IluFactors out;
  SparseCsr& lu = out.combined;
  lu = SparseCsr(n, n);
  lu.row_ptr = fills.row_ptr;
  lu.col_idx = fills.col_idx;
  lu.values.assign(fills.col_idx.size(), 0.0);
  out.diag_pos.resize(n);

  for (Index i = 0; i < n; ++i) {
    // scatter A's row into the pattern; both are sorted
    Offset q = lu.row_ptr[i];
    for (Offset k = a.row_begin(i); k < a.row_end(i); ++k) {
      while (q < lu.row_ptr[i + 1] && lu.col_idx[q] < a.col_idx[k]) ++q;
      if (q == lu.row_ptr[i + 1] || lu.col_idx[q] != a.col_idx[k])
        throw FormatError("ilu_factorize: fill pattern does not contain A's pattern");
      lu.values[q] = a.values[k];
    }
    const Offset d = lu.find(i, i);
    if (d < 0) throw ZeroPivotError("ilu_factorize: missing diagonal in row " + std::to_string(i), i);
    out.diag_pos[i] = d;
    lu.values[d] += diag_shift;
  }

  std::vector<Offset> pos(n, -1);
  for (Index i = 0; i < n; ++i) {
    const Offset rb = lu.row_ptr[i], re = lu.row_ptr[i + 1];
    for (Offset q = rb; q < re; ++q) pos[lu.col_idx[q]] = q;
    for (Offset q = rb; q < out.diag_pos[i]; ++q) {
      const Index p = lu.col_idx[q];
      const Real pivot = lu.values[out.diag_pos[p]];
      const Real lip = lu.values[q] / pivot;
      lu.values[q] = lip;
      for (Offset r = out.diag_pos[p] + 1; r < lu.row_ptr[p + 1]; ++r) {
        const Offset t = pos[lu.col_idx[r]];
        if (t >= 0) lu.values[t] -= lip * lu.values[r];
      }
    }
    for (Offset q = rb; q < re; ++q) pos[lu.col_idx[q]] = -1;
    if (!(std::abs(lu.values[out.diag_pos[i]]) >= kPivotFloor))
      throw ZeroPivotError("ilu_factorize: zero pivot in row " + std::to_string(i), i);
  }
  out.lower_schedule = build_level_schedule_strict(lu, Triangle::Lower);
  out.upper_schedule = build_level_schedule_strict(lu, Triangle::Upper);
  return out;
}

}  // namespace

IluFactors ilu_factorize(const SparseCsr& a, const FillLevels& fills, const IluOptions& opts) {
  require_dims(a.square() && a.n_rows == fills.n, "ilu_factorize: size mismatch");
  try {
    return factorize_once(a, fills, 0.0);
  } catch (const ZeroPivotError&) {
    if (!opts.shift_on_zero_pivot) throw;
  }
  return factorize_once(a, fills, opts.shift * inf_norm(a));
}

IluFactors ilu(const SparseCsr& a, Index k, const IluOptions& opts) {
  return ilu_factorize(a, ilu_symbolic(a, k), opts);
}

namespace {

inline void forward_row(const IluFactors& f, std::span<const Real> b, std::span<Real> y, Index i) {
  const SparseCsr& lu = f.combined;
  Real s = b[i];
  for (Offset q = lu.row_ptr[i]; q < f.diag_pos[i]; ++q) s -= lu.values[q] * y[lu.col_idx[q]];
  y[i] = s;
}

inline void backward_row(const IluFactors& f, std::span<Real> x, Index i) {
  const SparseCsr& lu = f.combined;
  Real s = x[i];
  for (Offset q = f.diag_pos[i] + 1; q < lu.row_ptr[i + 1]; ++q) s -= lu.values[q] * x[lu.col_idx[q]];
  x[i] = s / lu.values[f.diag_pos[i]];
}

}  // namespace

void trisolve(const IluFactors& f, std::span<const Real> b, std::span<Real> x) {
  require_dims(b.size() == static_cast<std::size_t>(f.size()) && x.size() == b.size(),
               "trisolve: length mismatch");
  for_each_level_row(f.lower_schedule, [&](Index i) { forward_row(f, b, x, i); });
  for_each_level_row(f.upper_schedule, [&](Index i) { backward_row(f, x, i); });
}

Vector trisolve(const IluFactors& f, std::span<const Real> b) {
  Vector x(b.size());
  trisolve(f, b, x);
  return x;
}

void trisolve_sequential(const IluFactors& f, std::span<const Real> b, std::span<Real> x) {
  require_dims(b.size() == static_cast<std::size_t>(f.size()) && x.size() == b.size(),
               "trisolve: length mismatch");
  for (Index i = 0; i < f.size(); ++i) forward_row(f, b, x, i);
  for (Index i = f.size() - 1; i >= 0; --i) backward_row(f, x, i);
}

SparseCsr lower_factor(const IluFactors& f) {
  const SparseCsr& lu = f.combined;
  SparseCsr l(lu.n_rows, lu.n_cols);
  for (Index i = 0; i < lu.n_rows; ++i) {
    for (Offset q = lu.row_ptr[i]; q < f.diag_pos[i]; ++q) {
      l.col_idx.push_back(lu.col_idx[q]);
      l.values.push_back(lu.values[q]);
    }
    l.col_idx.push_back(i);
    l.values.push_back(1.0);
    l.row_ptr[i + 1] = static_cast<Offset>(l.col_idx.size());
  }
  return l;
}

SparseCsr upper_factor(const IluFactors& f) {
  const SparseCsr& lu = f.combined;
  SparseCsr u(lu.n_rows, lu.n_cols);
  for (Index i = 0; i < lu.n_rows; ++i) {
    for (Offset q = f.diag_pos[i]; q < lu.row_ptr[i + 1]; ++q) {
      u.col_idx.push_back(lu.col_idx[q]);
      u.values.push_back(lu.values[q]);
    }
    u.row_ptr[i + 1] = static_cast<Offset>(u.col_idx.size());
  }
  return u;
}

void lower_solve(const SparseCsr& lower, const LevelSchedule& s, std::span<const Real> b,
                 std::span<Real> x) {
  require_dims(b.size() == static_cast<std::size_t>(lower.n_rows) && x.size() == b.size(),
               "lower_solve: length mismatch");
  for_each_level_row(s, [&](Index i) {
    const Offset last = lower.row_end(i) - 1;
    Real sum = b[i];
    for (Offset q = lower.row_begin(i); q < last; ++q) sum -= lower.values[q] * x[lower.col_idx[q]];
    x[i] = sum / lower.values[last];
  });
}

}  // namespace hecsolve
