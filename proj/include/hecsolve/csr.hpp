#pragma once

#include <span>
#include <vector>

#include "hecsolve/common.hpp"

namespace hecsolve {

/// Compressed sparse row matrix. Canonical form: columns strictly increasing
/// within each row, no duplicates, every column < n_cols. All builders in
/// this library produce canonical matrices.
struct SparseCsr {
  Index n_rows = 0;
  Index n_cols = 0;
  std::vector<Offset> row_ptr{0};
  std::vector<Index> col_idx;
  std::vector<Real> values;

  SparseCsr() = default;
  SparseCsr(Index rows, Index cols) : n_rows(rows), n_cols(cols), row_ptr(rows + 1, 0) {}

  Offset nnz() const noexcept { return row_ptr.empty() ? 0 : row_ptr.back(); }
  Offset row_begin(Index i) const noexcept { return row_ptr[i]; }
  Offset row_end(Index i) const noexcept { return row_ptr[i + 1]; }
  Index row_nnz(Index i) const noexcept { return static_cast<Index>(row_ptr[i + 1] - row_ptr[i]); }
  bool square() const noexcept { return n_rows == n_cols; }

  std::span<const Index> row_cols(Index i) const {
    return {col_idx.data() + row_ptr[i], static_cast<std::size_t>(row_nnz(i))};
  }
  std::span<const Real> row_vals(Index i) const {
    return {values.data() + row_ptr[i], static_cast<std::size_t>(row_nnz(i))};
  }

  /// Stored value at (i, j), or 0 if (i, j) is outside the pattern.
  Real at(Index i, Index j) const;
  /// Position of (i, j) in col_idx/values, or -1.
  Offset find(Index i, Index j) const;

  /// Throws FormatError unless the matrix is canonical.
  void validate() const;
  bool is_canonical() const noexcept;

  static SparseCsr identity(Index n);

  friend bool operator==(const SparseCsr&, const SparseCsr&) = default;
};

struct Triplet {
  Index row;
  Index col;
  Real value;
};

/// Builds a canonical matrix: entries sorted by column, duplicates summed.
/// Explicit zeros are kept unless drop_zeros is set.
SparseCsr csr_from_triplets(Index n_rows, Index n_cols, std::vector<Triplet> entries,
                            bool drop_zeros = false);

SparseCsr transpose(const SparseCsr& a);

/// Sparse product a*b (Gustavson row-by-row), canonical output.
SparseCsr multiply(const SparseCsr& a, const SparseCsr& b);

/// Galerkin triple product pt * a * p where pt is the transpose of p.
SparseCsr galerkin_product(const SparseCsr& pt, const SparseCsr& a, const SparseCsr& p);

/// Diagonal entries (0 where absent).
Vector diagonal(const SparseCsr& a);

/// Principal submatrix on the given (sorted or unsorted) index list; the
/// k-th row/column of the result is rows[k] of a. Entries whose column is
/// not in the list are dropped.
SparseCsr principal_submatrix(const SparseCsr& a, std::span<const Index> rows);

/// Structural pattern of a + a^T without values (used as the adjacency graph).
struct Graph {
  Index n = 0;
  std::vector<Offset> ptr{0};
  std::vector<Index> adj;

  std::span<const Index> neighbors(Index v) const {
    return {adj.data() + ptr[v], static_cast<std::size_t>(ptr[v + 1] - ptr[v])};
  }
  Index degree(Index v) const noexcept { return static_cast<Index>(ptr[v + 1] - ptr[v]); }
};

/// Symmetrized adjacency graph of a square matrix, self-loops removed.
Graph adjacency_graph(const SparseCsr& a);

Real frobenius_norm(const SparseCsr& a);
Real inf_norm(const SparseCsr& a);

}  // namespace hecsolve
