#include "hecsolve/ras.hpp"

#include <string>

#include "hecsolve/parallel.hpp"
#include "hecsolve/timer.hpp"

namespace hecsolve {

std::vector<IluFactors> factorize_blocks(const RasBlocks& blocks, Index k, const IluOptions& opts) {
  std::vector<IluFactors> out(blocks.blocks.size());
  parallel_tasks(static_cast<std::ptrdiff_t>(out.size()), [&](std::ptrdiff_t b) {
    out[b] = ilu(blocks.blocks[b].local_matrix, k, opts);
  });
  return out;
}

void ras_apply(const RasBlocks& blocks, const std::vector<IluFactors>& factors,
               std::span<const Real> r, std::span<Real> z) {
  if (factors.size() != blocks.blocks.size())
    throw Error("ras_apply: every block needs its factorization");
  require_dims(r.size() == static_cast<std::size_t>(blocks.n) && z.size() == r.size(),
               "ras_apply: length mismatch");
  parallel_tasks(static_cast<std::ptrdiff_t>(factors.size()), [&](std::ptrdiff_t b) {
    const RasBlock& blk = blocks.blocks[b];
    require_dims(factors[b].size() == blk.size(), "ras_apply: factor size != block size");
    Vector local_r(blk.size()), local_z(blk.size());
    for (Index k = 0; k < blk.size(); ++k) local_r[k] = r[blk.local_to_global[k]];
    trisolve(factors[b], local_r, local_z);
    for (Index k = 0; k < blk.size(); ++k)
      if (blk.is_owned[k]) z[blk.local_to_global[k]] = local_z[k];
  });
}

Vector ras_apply(const RasBlocks& blocks, const std::vector<IluFactors>& factors,
                 std::span<const Real> r) {
  Vector z(r.size());
  ras_apply(blocks, factors, r, z);
  return z;
}

namespace {

std::vector<std::vector<Index>> owned_sets(const RowPartition& p) {
  std::vector<std::vector<Index>> sets(p.n_parts);
  const auto labels = p.labels();
  for (Index i = 0; i < static_cast<Index>(labels.size()); ++i) sets[labels[i]].push_back(i);
  return sets;
}

}  // namespace

RasIluPreconditioner::RasIluPreconditioner(const SparseCsr& a, const RasOptions& opts,
                                           const Partitioner& partitioner)
    : n_(a.n_rows), opts_(opts) {
  Stopwatch sw;
  require_dims(a.square(), "RAS: matrix must be square");
  if (opts.outer_parts < 1 || opts.inner_parts < 1) throw Error("RAS: part counts must be >= 1");

  const RowPartition outer_partition = partitioner.partition(a, opts.outer_parts);
  const RasBlocks outer = extract_blocks(a, owned_sets(outer_partition), opts.outer_overlap);

  std::vector<SparseCsr> block_matrices;
  for (const RasBlock& ob : outer.blocks) {
    const RowPartition inner_partition = partitioner.partition(ob.local_matrix, opts.inner_parts);
    const RasBlocks inner =
        extract_blocks(ob.local_matrix, owned_sets(inner_partition), opts.inner_overlap);
    for (const RasBlock& ib : inner.blocks) {
      Task t;
      t.local_to_global.resize(ib.size());
      for (Index k = 0; k < ib.size(); ++k) {
        const Index outer_local = ib.local_to_global[k];
        t.local_to_global[k] = ob.local_to_global[outer_local];
        if (ib.is_owned[k] && ob.is_owned[outer_local]) {
          t.write_local.push_back(k);
          t.write_global.push_back(t.local_to_global[k]);
        }
      }
      block_matrices.push_back(ib.local_matrix);
      tasks_.push_back(std::move(t));
    }
  }
  // distinct blocks factorize concurrently
  parallel_tasks(static_cast<std::ptrdiff_t>(tasks_.size()), [&](std::ptrdiff_t b) {
    tasks_[b].factors = ilu(block_matrices[b], opts.fill_level, opts.ilu);
  });
  setup_seconds_ = sw.seconds();
}

void RasIluPreconditioner::apply(std::span<const Real> r, std::span<Real> z) const {
  require_dims(r.size() == static_cast<std::size_t>(n_) && z.size() == r.size(),
               "RAS apply: length mismatch");
  parallel_tasks(static_cast<std::ptrdiff_t>(tasks_.size()), [&](std::ptrdiff_t b) {
    const Task& t = tasks_[b];
    const auto m = t.local_to_global.size();
    Vector local_r(m), local_z(m);
    for (std::size_t k = 0; k < m; ++k) local_r[k] = r[t.local_to_global[k]];
    trisolve(t.factors, local_r, local_z);
    for (std::size_t k = 0; k < t.write_local.size(); ++k) z[t.write_global[k]] = local_z[t.write_local[k]];
  });
}

std::string RasIluPreconditioner::name() const {
  return "ras-ilu(" + std::to_string(opts_.fill_level) + ") outer=" +
         std::to_string(opts_.outer_parts) + "/" + std::to_string(opts_.outer_overlap) +
         " inner=" + std::to_string(opts_.inner_parts) + "/" + std::to_string(opts_.inner_overlap);
}

Offset RasIluPreconditioner::factor_nnz() const noexcept {
  Offset total = 0;
  for (const Task& t : tasks_) total += t.factors.combined.nnz();
  return total;
}

}  // namespace hecsolve
