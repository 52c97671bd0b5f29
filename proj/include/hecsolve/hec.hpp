#pragma once

#include <span>

#include "hecsolve/common.hpp"
#include "hecsolve/csr.hpp"

namespace hecsolve {

inline constexpr Index kDefaultEllWidthCap = 20;
inline constexpr Index kDefaultStrideUnit = 32;

/// Hybrid ELL + CSR storage. The ELL block holds the first
/// min(row_nnz, ell_width) entries of every row, column-major with leading
/// dimension ell_stride; padding slots carry column n_cols and value 0.
/// Entries that do not fit land in csr_rest, which has n_rows rows.
struct HecMatrix {
  Index n_rows = 0;
  Index n_cols = 0;
  Index ell_width = 0;
  Index ell_stride = 0;
  std::vector<Index> ell_col;
  std::vector<Real> ell_val;
  SparseCsr csr_rest;

  Index sentinel() const noexcept { return n_cols; }
  std::size_t slot(Index row, Index j) const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(ell_stride) +
           static_cast<std::size_t>(row);
  }
  Offset nnz() const noexcept;
};

/// Splits a canonical matrix into HEC storage. Throws FormatError on
/// non-canonical input.
HecMatrix hec_from_csr(const SparseCsr& a, Index ell_width_cap = kDefaultEllWidthCap,
                       Index stride_unit = kDefaultStrideUnit);

/// Reassembles the canonical CSR matrix a HEC matrix was built from.
SparseCsr csr_from_hec(const HecMatrix& h);

/// y = A x. ELL pass first, then the CSR remainder, one row per work item.
void spmv(const HecMatrix& a, std::span<const Real> x, std::span<Real> y);
Vector spmv(const HecMatrix& a, std::span<const Real> x);

void spmv_csr(const SparseCsr& a, std::span<const Real> x, std::span<Real> y);
Vector spmv_csr(const SparseCsr& a, std::span<const Real> x);

/// y = alpha * A x + beta * y
void spmv_axpby(Real alpha, const HecMatrix& a, std::span<const Real> x, Real beta,
                std::span<Real> y);

/// r = b - A x
void residual(const HecMatrix& a, std::span<const Real> x, std::span<const Real> b,
              std::span<Real> r);
void residual_csr(const SparseCsr& a, std::span<const Real> x, std::span<const Real> b,
                  std::span<Real> r);

}  // namespace hecsolve
