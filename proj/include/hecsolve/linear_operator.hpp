#pragma once

#include <span>

#include "hecsolve/csr.hpp"
#include "hecsolve/hec.hpp"
#include "hecsolve/partition.hpp"

namespace hecsolve {

/// y = A x for square A.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual Index size() const = 0;
  virtual void apply(std::span<const Real> x, std::span<Real> y) const = 0;
  /// Values moved through the exchange cache per apply (0 when unpartitioned).
  virtual Offset exchange_volume() const { return 0; }
};

/// Whole-matrix HEC SpMV.
class HecOperator final : public LinearOperator {
 public:
  explicit HecOperator(const SparseCsr& a, Index ell_width_cap = kDefaultEllWidthCap,
                       Index stride_unit = kDefaultStrideUnit);
  explicit HecOperator(HecMatrix h) : h_(std::move(h)) {}

  Index size() const override { return h_.n_rows; }
  void apply(std::span<const Real> x, std::span<Real> y) const override { spmv(h_, x, y); }
  const HecMatrix& matrix() const noexcept { return h_; }

 private:
  HecMatrix h_;
};

/// Row-partitioned SpMV with halo exchange. Vectors stay in the caller's
/// ordering; they are permuted into partition order around each product.
class PartitionedOperator final : public LinearOperator {
 public:
  PartitionedOperator(const SparseCsr& a, Index n_parts,
                      const Partitioner& partitioner = BisectionPartitioner{});

  Index size() const override { return partition_.n_rows(); }
  void apply(std::span<const Real> x, std::span<Real> y) const override;
  Offset exchange_volume() const override { return matrix_.plan.volume(); }

  const RowPartition& partition() const noexcept { return partition_; }
  const PartitionedMatrix& partitioned() const noexcept { return matrix_; }

 private:
  RowPartition partition_;
  PartitionedMatrix matrix_;
};

}  // namespace hecsolve
