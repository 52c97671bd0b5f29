#include "hecsolve/csr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hecsolve {

Offset SparseCsr::find(Index i, Index j) const {
  const auto cols = row_cols(i);
  const auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j) return -1;
  return row_ptr[i] + (it - cols.begin());
}

Real SparseCsr::at(Index i, Index j) const {
  const Offset k = find(i, j);
  return k < 0 ? 0.0 : values[k];
}

bool SparseCsr::is_canonical() const noexcept {
  if (n_rows < 0 || n_cols < 0) return false;
  if (row_ptr.size() != static_cast<std::size_t>(n_rows) + 1 || row_ptr[0] != 0) return false;
  if (col_idx.size() != static_cast<std::size_t>(row_ptr.back()) || values.size() != col_idx.size())
    return false;
  for (Index i = 0; i < n_rows; ++i) {
    if (row_ptr[i + 1] < row_ptr[i]) return false;
    for (Offset k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      if (col_idx[k] < 0 || col_idx[k] >= n_cols) return false;
      if (k > row_ptr[i] && col_idx[k] <= col_idx[k - 1]) return false;
    }
  }
  return true;
}

void SparseCsr::validate() const {
  if (!is_canonical()) throw FormatError("matrix is not in canonical CSR form");
}

SparseCsr SparseCsr::identity(Index n) {
  SparseCsr a(n, n);
  a.col_idx.resize(n);
  a.values.assign(n, 1.0);
  for (Index i = 0; i < n; ++i) {
    a.row_ptr[i + 1] = i + 1;
    a.col_idx[i] = i;
  }
  return a;
}

SparseCsr csr_from_triplets(Index n_rows, Index n_cols, std::vector<Triplet> entries,
                            bool drop_zeros) {
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= n_rows || t.col < 0 || t.col >= n_cols)
      throw FormatError("triplet index out of range");
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseCsr a(n_rows, n_cols);
  a.col_idx.reserve(entries.size());
  a.values.reserve(entries.size());
  std::size_t k = 0;
  for (Index i = 0; i < n_rows; ++i) {
    while (k < entries.size() && entries[k].row == i) {
      const Index j = entries[k].col;
      Real v = 0.0;
      while (k < entries.size() && entries[k].row == i && entries[k].col == j) v += entries[k++].value;
      if (drop_zeros && v == 0.0) continue;
      a.col_idx.push_back(j);
      a.values.push_back(v);
    }
    a.row_ptr[i + 1] = static_cast<Offset>(a.col_idx.size());
  }
  return a;
}

SparseCsr transpose(const SparseCsr& a) {
  SparseCsr t(a.n_cols, a.n_rows);
  for (Offset k = 0; k < a.nnz(); ++k) ++t.row_ptr[a.col_idx[k] + 1];
  std::partial_sum(t.row_ptr.begin(), t.row_ptr.end(), t.row_ptr.begin());
  t.col_idx.resize(a.nnz());
  t.values.resize(a.nnz());
  std::vector<Offset> next(t.row_ptr.begin(), t.row_ptr.end() - 1);
  for (Index i = 0; i < a.n_rows; ++i) {
    for (Offset k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      const Offset dst = next[a.col_idx[k]]++;
      t.col_idx[dst] = i;
      t.values[dst] = a.values[k];
    }
  }
  return t;
}

SparseCsr multiply(const SparseCsr& a, const SparseCsr& b) {
  require_dims(a.n_cols == b.n_rows, "multiply: inner dimensions differ");
  SparseCsr c(a.n_rows, b.n_cols);
  std::vector<Offset> marker(b.n_cols, -1);
  std::vector<Index> row_cols;
  std::vector<Real> acc(b.n_cols, 0.0);
  for (Index i = 0; i < a.n_rows; ++i) {
    row_cols.clear();
    for (Offset ka = a.row_ptr[i]; ka < a.row_ptr[i + 1]; ++ka) {
      const Index p = a.col_idx[ka];
      const Real av = a.values[ka];
      for (Offset kb = b.row_ptr[p]; kb < b.row_ptr[p + 1]; ++kb) {
        const Index j = b.col_idx[kb];
        if (marker[j] != i) {
          marker[j] = i;
          acc[j] = 0.0;
          row_cols.push_back(j);
        }
        acc[j] += av * b.values[kb];
      }
    }
    std::sort(row_cols.begin(), row_cols.end());
    for (Index j : row_cols) {
      c.col_idx.push_back(j);
      c.values.push_back(acc[j]);
    }
    c.row_ptr[i + 1] = static_cast<Offset>(c.col_idx.size());
  }
  return c;
}

SparseCsr galerkin_product(const SparseCsr& pt, const SparseCsr& a, const SparseCsr& p) {
  return multiply(pt, multiply(a, p));
}

Vector diagonal(const SparseCsr& a) {
  Vector d(std::min(a.n_rows, a.n_cols), 0.0);
  for (Index i = 0; i < static_cast<Index>(d.size()); ++i) d[i] = a.at(i, i);
  return d;
}

SparseCsr principal_submatrix(const SparseCsr& a, std::span<const Index> rows) {
  std::vector<Index> local(a.n_cols, -1);
  for (std::size_t k = 0; k < rows.size(); ++k) local[rows[k]] = static_cast<Index>(k);
  const auto m = static_cast<Index>(rows.size());
  SparseCsr s(m, m);
  std::vector<std::pair<Index, Real>> buf;
  for (Index r = 0; r < m; ++r) {
    buf.clear();
    const Index g = rows[r];
    for (Offset k = a.row_ptr[g]; k < a.row_ptr[g + 1]; ++k) {
      const Index lj = local[a.col_idx[k]];
      if (lj >= 0) buf.emplace_back(lj, a.values[k]);
    }
    std::sort(buf.begin(), buf.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [j, v] : buf) {
      s.col_idx.push_back(j);
      s.values.push_back(v);
    }
    s.row_ptr[r + 1] = static_cast<Offset>(s.col_idx.size());
  }
  return s;
}

Graph adjacency_graph(const SparseCsr& a) {
  require_dims(a.square(), "adjacency_graph: matrix must be square");
  const Index n = a.n_rows;
  std::vector<Triplet> edges;
  edges.reserve(2 * static_cast<std::size_t>(a.nnz()));
  for (Index i = 0; i < n; ++i) {
    for (Index j : a.row_cols(i)) {
      if (j == i) continue;
      edges.push_back({i, j, 1.0});
      edges.push_back({j, i, 1.0});
    }
  }
  const SparseCsr s = csr_from_triplets(n, n, std::move(edges));
  Graph g;
  g.n = n;
  g.ptr = s.row_ptr;
  g.adj = s.col_idx;
  return g;
}

Real frobenius_norm(const SparseCsr& a) {
  Real s = 0.0;
  for (Real v : a.values) s += v * v;
  return std::sqrt(s);
}

Real inf_norm(const SparseCsr& a) {
  Real m = 0.0;
  for (Index i = 0; i < a.n_rows; ++i) {
    Real s = 0.0;
    for (Real v : a.row_vals(i)) s += std::abs(v);
    m = std::max(m, s);
  }
  return m;
}

}  // namespace hecsolve
