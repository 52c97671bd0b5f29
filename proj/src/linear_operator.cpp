#include "hecsolve/linear_operator.hpp"

namespace hecsolve {

HecOperator::HecOperator(const SparseCsr& a, Index ell_width_cap, Index stride_unit)
    : h_(hec_from_csr(a, ell_width_cap, stride_unit)) {
  require_dims(a.square(), "HecOperator: matrix must be square");
}

PartitionedOperator::PartitionedOperator(const SparseCsr& a, Index n_parts,
                                         const Partitioner& partitioner)
    : partition_(partitioner.partition(a, n_parts)),
      matrix_(build_partitioned(permute_symmetric(a, partition_), partition_)) {}

void PartitionedOperator::apply(std::span<const Real> x, std::span<Real> y) const {
  require_dims(x.size() == static_cast<std::size_t>(size()) && y.size() == x.size(),
               "PartitionedOperator: length mismatch");
  const Vector xp = permute_vector(x, partition_);
  const Vector yp = partitioned_spmv(matrix_, xp);
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = yp[partition_.perm[i]];
}

}  // namespace hecsolve
