#include <algorithm>

#include "hecsolve/parallel.hpp"
#include "hecsolve/partition.hpp"

namespace hecsolve {

Offset CommPlan::volume() const noexcept {
  Offset v = 0;
  for (const auto& r : recv_idx) v += static_cast<Offset>(r.size());
  return v;
}

CommPlan build_comm_plan(const SparseCsr& a_permuted, const RowPartition& p) {
  require_dims(a_permuted.square() && a_permuted.n_rows == p.n_rows(),
               "build_comm_plan: matrix/partition size mismatch");
  CommPlan plan;
  plan.n_parts = p.n_parts;
  plan.part_ptr = p.part_ptr;
  plan.recv_idx.resize(p.n_parts);
  plan.recv_slot.resize(p.n_parts);
  plan.send_idx.resize(p.n_parts);

  std::vector<Index> marker(a_permuted.n_cols, -1);
  std::vector<char> needed(a_permuted.n_cols, 0);
  for (Index q = 0; q < p.n_parts; ++q) {
    const Index lo = p.part_ptr[q], hi = p.part_ptr[q + 1];
    auto& recv = plan.recv_idx[q];
    for (Index i = lo; i < hi; ++i) {
      for (Index j : a_permuted.row_cols(i)) {
        if ((j >= lo && j < hi) || marker[j] == q) continue;
        marker[j] = q;
        recv.push_back(j);
        needed[j] = 1;
      }
    }
    std::sort(recv.begin(), recv.end());
  }

  // Cache position of every needed value: owner's slice, ascending row order.
  std::vector<Index> slot(a_permuted.n_cols, -1);
  plan.send_offset.assign(p.n_parts + 1, 0);
  for (Index q = 0; q < p.n_parts; ++q) {
    const Index lo = p.part_ptr[q], hi = p.part_ptr[q + 1];
    for (Index i = lo; i < hi; ++i) {
      if (!needed[i]) continue;
      slot[i] = plan.send_offset[q] + static_cast<Index>(plan.send_idx[q].size());
      plan.send_idx[q].push_back(i - lo);
    }
    plan.send_offset[q + 1] = plan.send_offset[q] + static_cast<Index>(plan.send_idx[q].size());
  }
  for (Index q = 0; q < p.n_parts; ++q) {
    plan.recv_slot[q].reserve(plan.recv_idx[q].size());
    for (Index j : plan.recv_idx[q]) plan.recv_slot[q].push_back(slot[j]);
  }
  return plan;
}

PartitionedMatrix build_partitioned(const SparseCsr& a_permuted, const RowPartition& p,
                                    Index ell_width_cap, Index stride_unit) {
  PartitionedMatrix m;
  m.plan = build_comm_plan(a_permuted, p);
  m.blocks.reserve(p.n_parts);
  std::vector<Index> local(a_permuted.n_cols, -1);
  for (Index q = 0; q < p.n_parts; ++q) {
    const Index lo = p.part_ptr[q], hi = p.part_ptr[q + 1];
    const Index own = hi - lo;
    const auto& recv = m.plan.recv_idx[q];
    for (Index i = lo; i < hi; ++i) local[i] = i - lo;
    for (std::size_t k = 0; k < recv.size(); ++k) local[recv[k]] = own + static_cast<Index>(k);

    SparseCsr block(own, own + static_cast<Index>(recv.size()));
    std::vector<std::pair<Index, Real>> row;
    for (Index i = lo; i < hi; ++i) {
      row.clear();
      for (Offset k = a_permuted.row_begin(i); k < a_permuted.row_end(i); ++k)
        row.emplace_back(local[a_permuted.col_idx[k]], a_permuted.values[k]);
      std::sort(row.begin(), row.end(),
                [](const auto& x, const auto& y) { return x.first < y.first; });
      for (const auto& [j, v] : row) {
        block.col_idx.push_back(j);
        block.values.push_back(v);
      }
      block.row_ptr[i - lo + 1] = static_cast<Offset>(block.col_idx.size());
    }
    for (Index i = lo; i < hi; ++i) local[i] = -1;
    for (Index j : recv) local[j] = -1;
    m.blocks.push_back(hec_from_csr(block, ell_width_cap, stride_unit));
  }
  return m;
}

void partitioned_spmv(const PartitionedMatrix& m, std::span<const Real> x, std::span<Real> y) {
  const CommPlan& plan = m.plan;
  require_dims(m.blocks.size() == static_cast<std::size_t>(plan.n_parts),
               "partitioned_spmv: block count != part count");
  require_dims(x.size() == static_cast<std::size_t>(m.n_rows()) && y.size() == x.size(),
               "partitioned_spmv: vector length mismatch");
  for (Index q = 0; q < plan.n_parts; ++q) {
    const Index own = plan.part_ptr[q + 1] - plan.part_ptr[q];
    require_dims(m.blocks[q].n_rows == own &&
                     m.blocks[q].n_cols == own + static_cast<Index>(plan.recv_idx[q].size()),
                 "partitioned_spmv: block shape does not match plan");
  }

  Vector cache(plan.cache_size());
  // gather: every part publishes the values others need
  parallel_tasks(plan.n_parts, [&](std::ptrdiff_t q) {
    const Index lo = plan.part_ptr[q];
    Index pos = plan.send_offset[q];
    for (Index local_row : plan.send_idx[q]) cache[pos++] = x[lo + local_row];
  });
  // scatter + local multiply
  parallel_tasks(plan.n_parts, [&](std::ptrdiff_t q) {
    const Index lo = plan.part_ptr[q], hi = plan.part_ptr[q + 1];
    const auto& slots = plan.recv_slot[q];
    Vector ext(static_cast<std::size_t>(hi - lo) + slots.size());
    std::copy(x.begin() + lo, x.begin() + hi, ext.begin());
    for (std::size_t k = 0; k < slots.size(); ++k) ext[(hi - lo) + k] = cache[slots[k]];
    spmv(m.blocks[q], ext, y.subspan(lo, hi - lo));
  });
}

Vector partitioned_spmv(const PartitionedMatrix& m, std::span<const Real> x) {
  Vector y(x.size());
  partitioned_spmv(m, x, y);
  return y;
}

}  // namespace hecsolve
