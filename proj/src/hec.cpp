#include "hecsolve/hec.hpp"

#include <algorithm>

#include "hecsolve/parallel.hpp"

namespace hecsolve {

Offset HecMatrix::nnz() const noexcept {
  Offset count = csr_rest.nnz();
  for (Index c : ell_col) count += (c != sentinel());
  return count;
}

HecMatrix hec_from_csr(const SparseCsr& a, Index ell_width_cap, Index stride_unit) {
  if (ell_width_cap < 0) throw Error("hec_from_csr: ell_width_cap must be >= 0");
  if (stride_unit < 1) throw Error("hec_from_csr: stride_unit must be >= 1");
  a.validate();

  HecMatrix h;
  h.n_rows = a.n_rows;
  h.n_cols = a.n_cols;
  Index max_row = 0;
  for (Index i = 0; i < a.n_rows; ++i) max_row = std::max(max_row, a.row_nnz(i));
  h.ell_width = std::min(ell_width_cap, max_row);
  h.ell_stride = (a.n_rows + stride_unit - 1) / stride_unit * stride_unit;
  if (h.ell_stride == 0) h.ell_stride = stride_unit;

  const auto slots = static_cast<std::size_t>(h.ell_width) * static_cast<std::size_t>(h.ell_stride);
  h.ell_col.assign(slots, h.sentinel());
  h.ell_val.assign(slots, 0.0);

  h.csr_rest = SparseCsr(a.n_rows, a.n_cols);
  for (Index i = 0; i < a.n_rows; ++i) {
    const Offset b = a.row_begin(i);
    const Index len = a.row_nnz(i);
    const Index in_ell = std::min(len, h.ell_width);
    for (Index j = 0; j < in_ell; ++j) {
      h.ell_col[h.slot(i, j)] = a.col_idx[b + j];
      h.ell_val[h.slot(i, j)] = a.values[b + j];
    }
    for (Index j = in_ell; j < len; ++j) {
      h.csr_rest.col_idx.push_back(a.col_idx[b + j]);
      h.csr_rest.values.push_back(a.values[b + j]);
    }
    h.csr_rest.row_ptr[i + 1] = static_cast<Offset>(h.csr_rest.col_idx.size());
  }
  return h;
}

SparseCsr csr_from_hec(const HecMatrix& h) {
  SparseCsr a(h.n_rows, h.n_cols);
  for (Index i = 0; i < h.n_rows; ++i) {
    for (Index j = 0; j < h.ell_width; ++j) {
      const Index c = h.ell_col[h.slot(i, j)];
      if (c == h.sentinel()) continue;
      a.col_idx.push_back(c);
      a.values.push_back(h.ell_val[h.slot(i, j)]);
    }
    const auto cols = h.csr_rest.row_cols(i);
    const auto vals = h.csr_rest.row_vals(i);
    a.col_idx.insert(a.col_idx.end(), cols.begin(), cols.end());
    a.values.insert(a.values.end(), vals.begin(), vals.end());
    a.row_ptr[i + 1] = static_cast<Offset>(a.col_idx.size());
  }
  return a;
}

namespace {

inline Real ell_row(const HecMatrix& a, std::span<const Real> x, Index i) {
  Real sum = 0.0;
  const Index sentinel = a.sentinel();
  const std::size_t stride = static_cast<std::size_t>(a.ell_stride);
  std::size_t pos = static_cast<std::size_t>(i);
  for (Index j = 0; j < a.ell_width; ++j, pos += stride) {
    const Index c = a.ell_col[pos];
    if (c != sentinel) sum += a.ell_val[pos] * x[c];
  }
  return sum;
}

inline Real csr_row(const SparseCsr& a, std::span<const Real> x, Index i, Real sum) {
  for (Offset k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) sum += a.values[k] * x[a.col_idx[k]];
  return sum;
}

}  // namespace

void spmv(const HecMatrix& a, std::span<const Real> x, std::span<Real> y) {
  require_dims(x.size() == static_cast<std::size_t>(a.n_cols), "spmv: x length != n_cols");
  require_dims(y.size() == static_cast<std::size_t>(a.n_rows), "spmv: y length != n_rows");
  parallel_for(a.n_rows, [&](std::ptrdiff_t b, std::ptrdiff_t e) {
    for (auto i = static_cast<Index>(b); i < e; ++i) y[i] = ell_row(a, x, i);
    if (a.csr_rest.nnz() == 0) return;
    for (auto i = static_cast<Index>(b); i < e; ++i) y[i] = csr_row(a.csr_rest, x, i, y[i]);
  });
}

Vector spmv(const HecMatrix& a, std::span<const Real> x) {
  Vector y(a.n_rows);
  spmv(a, x, y);
  return y;
}

void spmv_csr(const SparseCsr& a, std::span<const Real> x, std::span<Real> y) {
  require_dims(x.size() == static_cast<std::size_t>(a.n_cols), "spmv_csr: x length != n_cols");
  require_dims(y.size() == static_cast<std::size_t>(a.n_rows), "spmv_csr: y length != n_rows");
  parallel_for(a.n_rows, [&](std::ptrdiff_t b, std::ptrdiff_t e) {
    for (auto i = static_cast<Index>(b); i < e; ++i) y[i] = csr_row(a, x, i, 0.0);
  });
}

Vector spmv_csr(const SparseCsr& a, std::span<const Real> x) {
  Vector y(a.n_rows);
  spmv_csr(a, x, y);
  return y;
}

void spmv_axpby(Real alpha, const HecMatrix& a, std::span<const Real> x, Real beta,
                std::span<Real> y) {
  require_dims(x.size() == static_cast<std::size_t>(a.n_cols), "spmv_axpby: x length != n_cols");
  require_dims(y.size() == static_cast<std::size_t>(a.n_rows), "spmv_axpby: y length != n_rows");
  parallel_for(a.n_rows, [&](std::ptrdiff_t b, std::ptrdiff_t e) {
    for (auto i = static_cast<Index>(b); i < e; ++i) {
      const Real ax = csr_row(a.csr_rest, x, i, ell_row(a, x, i));
      y[i] = alpha * ax + beta * y[i];
    }
  });
}

void residual(const HecMatrix& a, std::span<const Real> x, std::span<const Real> b,
              std::span<Real> r) {
  require_dims(b.size() == static_cast<std::size_t>(a.n_rows), "residual: b length != n_rows");
  spmv(a, x, r);
  parallel_for(a.n_rows, [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
    for (auto i = lo; i < hi; ++i) r[i] = b[i] - r[i];
  });
}

void residual_csr(const SparseCsr& a, std::span<const Real> x, std::span<const Real> b,
                  std::span<Real> r) {
  require_dims(b.size() == static_cast<std::size_t>(a.n_rows), "residual: b length != n_rows");
  spmv_csr(a, x, r);
  parallel_for(a.n_rows, [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
    for (auto i = lo; i < hi; ++i) r[i] = b[i] - r[i];
  });
}

}  // namespace hecsolve
