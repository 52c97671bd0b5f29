#pragma once

#include <span>
#include <vector>

#include "hecsolve/ilu.hpp"
#include "hecsolve/partition.hpp"
#include "hecsolve/preconditioner.hpp"

namespace hecsolve {

/// ILU(k) factors of every block of a decomposition.
std::vector<IluFactors> factorize_blocks(const RasBlocks& blocks, Index k,
                                         const IluOptions& opts = {});

/// Restricted additive Schwarz application: every block solves its
/// restriction of r with its ILU factors; only owned rows are written back.
/// Blocks run concurrently, each block's solve is level scheduled.
void ras_apply(const RasBlocks& blocks, const std::vector<IluFactors>& factors,
               std::span<const Real> r, std::span<Real> z);
Vector ras_apply(const RasBlocks& blocks, const std::vector<IluFactors>& factors,
                 std::span<const Real> r);

struct RasOptions {
  Index outer_parts = 1;
  Index inner_parts = 1;
  Index outer_overlap = 0;
  Index inner_overlap = 0;
  Index fill_level = 0;
  IluOptions ilu;
};

/// Two-level RAS-ILU(k). The matrix is split into outer_parts subdomains
/// (grown by outer_overlap layers); each subdomain matrix is split again
/// into inner_parts blocks (grown by inner_overlap layers) which carry the
/// ILU(k) factors. A global row is produced by the one inner block that owns
/// it inside the outer subdomain that owns it.
class RasIluPreconditioner final : public Preconditioner {
 public:
  RasIluPreconditioner(const SparseCsr& a, const RasOptions& opts,
                       const Partitioner& partitioner = BisectionPartitioner{});

  Index size() const override { return n_; }
  void apply(std::span<const Real> r, std::span<Real> z) const override;
  std::string name() const override;

  struct Task {
    std::vector<Index> local_to_global;
    std::vector<Index> write_local;   // local rows written back
    std::vector<Index> write_global;  // their global rows
    IluFactors factors;
  };

  const std::vector<Task>& tasks() const noexcept { return tasks_; }
  const RasOptions& options() const noexcept { return opts_; }
  /// Nonzeros stored in all block factors.
  Offset factor_nnz() const noexcept;

 private:
  Index n_ = 0;
  RasOptions opts_;
  std::vector<Task> tasks_;
};

}  // namespace hecsolve
