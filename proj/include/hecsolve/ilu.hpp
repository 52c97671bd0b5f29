#pragma once

#include <span>
#include <vector>

#include "hecsolve/csr.hpp"
#include "hecsolve/level_schedule.hpp"

namespace hecsolve {

/// Symbolic ILU(k) pattern with the fill level of every retained entry.
/// Entries of the original pattern have level 0; fill created through pivot
/// p gets level L_ip + L_pj + 1 and is kept only while that is <= k.
struct FillLevels {
  Index n = 0;
  Index k = 0;
  std::vector<Offset> row_ptr{0};
  std::vector<Index> col_idx;
  std::vector<Index> level;

  Offset nnz() const noexcept { return row_ptr.back(); }
};

/// Throws ZeroPivotError if a row has no structural diagonal.
FillLevels ilu_symbolic(const SparseCsr& a, Index k);

struct IluOptions {
  /// On a zero pivot, refactor once with every diagonal entry increased by
  /// shift * ||A||_inf instead of failing.
  bool shift_on_zero_pivot = false;
  Real shift = 1e-8;
};

/// Pivots with magnitude below this are treated as zero.
inline constexpr Real kPivotFloor = 1e-300;

/// L (unit diagonal, strictly lower part) and U (diagonal and upper part)
/// sharing one CSR over the ILU(k) pattern.
struct IluFactors {
  SparseCsr combined;
  std::vector<Offset> diag_pos;
  LevelSchedule lower_schedule;
  LevelSchedule upper_schedule;

  Index size() const noexcept { return combined.n_rows; }
};

/// IKJ incomplete elimination restricted to the pattern in fills.
IluFactors ilu_factorize(const SparseCsr& a, const FillLevels& fills, const IluOptions& opts = {});

/// Convenience: symbolic + numeric.
IluFactors ilu(const SparseCsr& a, Index k, const IluOptions& opts = {});

/// Solves L U x = b, level by level. Each row accumulates its terms in
/// column order, so the result is bitwise independent of the worker count.
void trisolve(const IluFactors& f, std::span<const Real> b, std::span<Real> x);
Vector trisolve(const IluFactors& f, std::span<const Real> b);

/// Plain forward/backward substitution in row order, no schedule.
void trisolve_sequential(const IluFactors& f, std::span<const Real> b, std::span<Real> x);

/// Separate L (with unit diagonal stored) and U as CSR matrices.
SparseCsr lower_factor(const IluFactors& f);
SparseCsr upper_factor(const IluFactors& f);

/// Solves T x = b for a lower-triangular T whose diagonal is the last entry
/// of every row, using a schedule from build_level_schedule(T, Lower).
void lower_solve(const SparseCsr& lower, const LevelSchedule& s, std::span<const Real> b,
                 std::span<Real> x);

}  // namespace hecsolve
