#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "hecsolve/csr.hpp"
#include "hecsolve/hec.hpp"

namespace hecsolve {

/// Assignment of rows to n_parts contiguous ranges of a new ordering.
/// perm maps old row index -> new row index; part p owns new indices
/// [part_ptr[p], part_ptr[p+1]).
struct RowPartition {
  Index n_parts = 0;
  std::vector<Index> perm;
  std::vector<Index> part_ptr;

  Index n_rows() const noexcept { return static_cast<Index>(perm.size()); }
  Index part_size(Index p) const noexcept { return part_ptr[p + 1] - part_ptr[p]; }
  /// Part owning a new-order index.
  Index part_of_new(Index new_row) const;
  /// new -> old
  std::vector<Index> inverse() const;
  /// Old row indices of part p, ascending.
  std::vector<Index> owned_rows(Index p) const;

  static RowPartition identity(Index n);
  /// Builds a partition from a per-row part label; rows of a part keep their
  /// relative order. Throws if a label is outside [0, n_parts).
  static RowPartition from_labels(std::span<const Index> part_of_row, Index n_parts);
  /// Part label per old row.
  std::vector<Index> labels() const;

  void validate() const;
};

class Partitioner {
 public:
  virtual ~Partitioner() = default;
  virtual RowPartition partition(const SparseCsr& a, Index n_parts) const = 0;
};

/// Recursive bisection by BFS level sets from a pseudo-peripheral vertex.
/// Part sizes are floor/ceil of n / n_parts. Neighbours are visited in
/// ascending index order and ties resolve to the lowest index, so the result
/// is deterministic. Disconnected components are laid out largest first.
class BisectionPartitioner final : public Partitioner {
 public:
  RowPartition partition(const SparseCsr& a, Index n_parts) const override;
};

/// Default partitioner. Throws DimensionError if n_parts > n_rows or a is not square.
RowPartition partition_rows(const SparseCsr& a, Index n_parts);

/// B = P A P^T with P the permutation new <- old.
SparseCsr permute_symmetric(const SparseCsr& a, const RowPartition& p);
/// y[perm[i]] = x[i]
Vector permute_vector(std::span<const Real> x, const RowPartition& p);
/// x[i] = y[perm[i]]
Vector unpermute_vector(std::span<const Real> y, const RowPartition& p);

/// Nonzeros of a whose row and column lie in different parts (a in new order).
Offset off_block_nnz(const SparseCsr& a_permuted, const RowPartition& p);

/// Halo exchange through one shared staging buffer. Each part writes the
/// values others need into its slice of the cache, then each part gathers
/// its halo from the cache.
struct CommPlan {
  Index n_parts = 0;
  std::vector<Index> part_ptr;
  /// send_idx[p]: local row offsets (within part p) whose x-values others read.
  std::vector<std::vector<Index>> send_idx;
  /// Cache slice [send_offset[p], send_offset[p+1]) belongs to part p.
  std::vector<Index> send_offset;
  /// recv_idx[p]: global (new-order) indices part p needs from outside its segment, ascending.
  std::vector<std::vector<Index>> recv_idx;
  /// recv_slot[p][k]: cache position holding recv_idx[p][k].
  std::vector<std::vector<Index>> recv_slot;

  Index cache_size() const noexcept { return send_offset.empty() ? 0 : send_offset.back(); }
  /// Total number of values received per exchange, sum of |recv_idx[p]|.
  Offset volume() const noexcept;
};

CommPlan build_comm_plan(const SparseCsr& a_permuted, const RowPartition& p);

/// Per-part row blocks in local column numbering: columns [0, own) address
/// the part's own segment and [own, own + |recv|) its halo, in recv order.
struct PartitionedMatrix {
  CommPlan plan;
  std::vector<HecMatrix> blocks;

  Index n_rows() const noexcept { return plan.part_ptr.empty() ? 0 : plan.part_ptr.back(); }
};

PartitionedMatrix build_partitioned(const SparseCsr& a_permuted, const RowPartition& p,
                                    Index ell_width_cap = kDefaultEllWidthCap,
                                    Index stride_unit = kDefaultStrideUnit);

/// y = A x for x, y in new order. Part p reads x[part_ptr[p] .. part_ptr[p+1])
/// plus its halo from the cache. Runs one task per part with a gather phase
/// and a compute phase.
void partitioned_spmv(const PartitionedMatrix& m, std::span<const Real> x, std::span<Real> y);
Vector partitioned_spmv(const PartitionedMatrix& m, std::span<const Real> x);

/// One subdomain of a restricted additive Schwarz decomposition. Local
/// numbering is ascending global index over owned plus overlap rows.
struct RasBlock {
  std::vector<Index> owned;            // ascending global rows
  std::vector<Index> overlap;          // ascending global rows added by overlap
  std::vector<Index> overlap_layer;    // BFS layer (1-based) of each overlap row
  std::vector<Index> local_to_global;  // ascending
  std::vector<char> is_owned;          // per local index
  SparseCsr local_matrix;

  Index size() const noexcept { return static_cast<Index>(local_to_global.size()); }
};

struct RasBlocks {
  Index n = 0;
  Index overlap = 0;
  std::vector<RasBlock> blocks;
};

/// Blocks of a matrix already in partition order: part p owns rows
/// [part_ptr[p], part_ptr[p+1]), grown by `overlap` BFS layers over the
/// symmetrized adjacency graph. Entries outside each block are dropped.
RasBlocks extract_ras_blocks(const SparseCsr& a_permuted, const RowPartition& p, Index overlap);

/// Same decomposition for arbitrary owned row sets (must be disjoint and
/// cover all rows).
RasBlocks extract_blocks(const SparseCsr& a, const std::vector<std::vector<Index>>& owned,
                         Index overlap);

/// Partition dump: one "row part" pair per line (0-based), '#' comments allowed.
void write_partition(const std::filesystem::path& path, const RowPartition& p);
RowPartition read_partition(const std::filesystem::path& path);

}  // namespace hecsolve
