#include <algorithm>
#include <string>

#include "hecsolve/amg.hpp"

namespace hecsolve::amg {

namespace {

/// Sparse working row: dense value array plus the list of touched columns.
struct WorkRow {
  explicit WorkRow(Index n) : value(n, 0.0), used(n, 0) {}

  void add(Index j, Real v) {
    if (!used[j]) {
      used[j] = 1;
      cols.push_back(j);
    }
    value[j] += v;
  }
  void clear() {
    for (Index j : cols) {
      value[j] = 0.0;
      used[j] = 0;
    }
    cols.clear();
  }

  std::vector<Real> value;
  std::vector<char> used;
  std::vector<Index> cols;
};

/// Direct-formula weights for one equation diag*e_i + sum_j row_j e_j = 0
/// over interpolatory set `interp` (coarse points). Appends (coarse col, w).
void direct_weights(Index i, Real diag, const WorkRow& row, const std::vector<Index>& interp,
                    const CfSplitting& cf, std::vector<std::pair<Index, Real>>& out) {
  Real neg_all = 0.0, pos_all = 0.0, neg_c = 0.0, pos_c = 0.0;
  for (Index j : row.cols) {
    if (j == i) continue;
    const Real v = row.value[j];
    (v < 0.0 ? neg_all : pos_all) += v;
  }
  for (Index j : interp) {
    const Real v = row.value[j];
    (v < 0.0 ? neg_c : pos_c) += v;
  }
  const Real alpha = neg_c != 0.0 ? neg_all / neg_c : 0.0;
  Real beta = 0.0;
  if (pos_c != 0.0) {
    beta = pos_all / pos_c;
  } else {
    diag += pos_all;  // positive couplings are lumped into the diagonal
  }
  if (diag == 0.0) throw ZeroPivotError("interpolation: zero diagonal in row " + std::to_string(i), i);
  for (Index j : interp) {
    const Real v = row.value[j];
    const Real w = v < 0.0 ? -alpha * v / diag : -beta * v / diag;
    if (w != 0.0) out.emplace_back(cf.coarse_index[j], w);
  }
}

template <class BuildRow>
SparseCsr assemble(const CfSplitting& cf, BuildRow&& build_row) {
  const Index n = cf.size();
  SparseCsr p(n, cf.n_coarse);
  std::vector<std::pair<Index, Real>> entries;
  for (Index i = 0; i < n; ++i) {
    entries.clear();
    if (cf.is_coarse(i)) {
      entries.emplace_back(cf.coarse_index[i], 1.0);
    } else {
      build_row(i, entries);
      if (entries.empty())
        throw Error("interpolation: F point " + std::to_string(i) + " has no interpolatory C point");
      std::sort(entries.begin(), entries.end());
    }
    for (const auto& [j, w] : entries) {
      p.col_idx.push_back(j);
      p.values.push_back(w);
    }
    p.row_ptr[i + 1] = static_cast<Offset>(p.col_idx.size());
  }
  return p;
}

}  // namespace

SparseCsr interp_direct(const SparseCsr& a, const CfSplitting& cf, const StrengthGraph& s) {
  require_dims(a.square() && a.n_rows == cf.size() && s.n == cf.size(), "interp_direct: size mismatch");
  WorkRow row(a.n_rows);
  std::vector<Index> interp;
  return assemble(cf, [&](Index i, std::vector<std::pair<Index, Real>>& out) {
    row.clear();
    Real diag = 0.0;
    for (Offset k = a.row_begin(i); k < a.row_end(i); ++k) {
      if (a.col_idx[k] == i) diag = a.values[k];
      else row.add(a.col_idx[k], a.values[k]);
    }
    interp.clear();
    for (Index j : s.row(i))
      if (cf.is_coarse(j)) interp.push_back(j);
    if (interp.empty()) return;
    direct_weights(i, diag, row, interp, cf, out);
  });
}

SparseCsr interp_standard(const SparseCsr& a, const CfSplitting& cf, const StrengthGraph& s) {
  require_dims(a.square() && a.n_rows == cf.size() && s.n == cf.size(),
               "interp_standard: size mismatch");
  const Vector d = diagonal(a);
  WorkRow row(a.n_rows);
  std::vector<char> in_set(a.n_rows, 0);
  std::vector<Index> interp;
  return assemble(cf, [&](Index i, std::vector<std::pair<Index, Real>>& out) {
    row.clear();
    for (Offset k = a.row_begin(i); k < a.row_end(i); ++k) row.add(a.col_idx[k], a.values[k]);

    interp.clear();
    auto take = [&](Index j) {
      if (cf.is_coarse(j) && !in_set[j]) {
        in_set[j] = 1;
        interp.push_back(j);
      }
    };
    for (Index j : s.row(i)) take(j);
    // eliminate strong F neighbours: e_k = -sum_{j != k} a_kj e_j / a_kk
    for (Index k : s.row(i)) {
      if (cf.is_coarse(k)) continue;
      if (d[k] == 0.0) throw ZeroPivotError("interpolation: zero diagonal in row " + std::to_string(k), k);
      const Real coef = row.value[k] / d[k];
      if (coef == 0.0) continue;
      row.value[k] = 0.0;
      for (Offset q = a.row_begin(k); q < a.row_end(k); ++q) {
        if (a.col_idx[q] == k) continue;
        row.add(a.col_idx[q], -coef * a.values[q]);
      }
      for (Index j : s.row(k)) take(j);
    }
    for (Index j : interp) in_set[j] = 0;
    if (interp.empty()) return;
    const Real diag = row.value[i];
    row.value[i] = 0.0;
    std::sort(interp.begin(), interp.end());
    direct_weights(i, diag, row, interp, cf, out);
  });
}

}  // namespace hecsolve::amg
