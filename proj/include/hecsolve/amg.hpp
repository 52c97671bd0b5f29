#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hecsolve/csr.hpp"
#include "hecsolve/hec.hpp"
#include "hecsolve/krylov.hpp"
#include "hecsolve/level_schedule.hpp"
#include "hecsolve/preconditioner.hpp"

namespace hecsolve::amg {

// ---------------------------------------------------------------------------
// Strength of connection

struct StrengthOptions {
  Real theta = 0.25;
  /// Only negative off-diagonals count (M-matrix variant):
  /// -a_ij >= theta * max_k(-a_ik).
  bool negative_only = false;
};

/// S_i: columns row i strongly depends on, stored row-wise.
struct StrengthGraph {
  Index n = 0;
  Real theta = 0.25;
  std::vector<Offset> ptr{0};
  std::vector<Index> idx;

  std::span<const Index> row(Index i) const {
    return {idx.data() + ptr[i], static_cast<std::size_t>(ptr[i + 1] - ptr[i])};
  }
  Offset edges() const noexcept { return ptr.back(); }
  /// S^T: rows that depend on each column.
  StrengthGraph transposed() const;
};

StrengthGraph strength(const SparseCsr& a, const StrengthOptions& opts = {});

// ---------------------------------------------------------------------------
// C/F splitting

struct CfSplitting {
  std::vector<char> coarse;          // 1 = C point
  std::vector<Index> coarse_index;   // ordinal of C points, -1 for F
  Index n_coarse = 0;

  Index size() const noexcept { return static_cast<Index>(coarse.size()); }
  bool is_coarse(Index i) const noexcept { return coarse[i] != 0; }
  static CfSplitting from_flags(std::vector<char> flags);
};

/// Classical Ruge-Stueben: first pass picks C points by descending measure
/// |S^T_i| (lowest index on ties), second pass turns F points into C where
/// two strongly connected F points share no strong C point. An empty
/// strength graph yields the all-C splitting.
CfSplitting rs_coarsen(const StrengthGraph& s);

/// Cleary-Luby-Jones-Plassmann: weights |S^T_i| + U[0,1) from the seed;
/// repeated independent-set selection with the two weight-update rules.
CfSplitting cljp_coarsen(const StrengthGraph& s, std::uint64_t seed);

/// True when every F point strongly depends on at least one C point.
bool splitting_is_valid(const StrengthGraph& s, const CfSplitting& cf);

// ---------------------------------------------------------------------------
// Interpolation

/// Direct interpolation: F rows use their strong C neighbours, weights
/// scaled so the row-sum of the equation is preserved.
SparseCsr interp_direct(const SparseCsr& a, const CfSplitting& cf, const StrengthGraph& s);

/// Standard interpolation: strong F neighbours are first eliminated through
/// their own equations, then the direct formula is applied to the result.
SparseCsr interp_standard(const SparseCsr& a, const CfSplitting& cf, const StrengthGraph& s);

// ---------------------------------------------------------------------------
// Smoothers

enum class SmootherKind { DampedJacobi, WeightedJacobi, Chebyshev, GaussSeidel };

struct SmootherConfig {
  SmootherKind kind = SmootherKind::DampedJacobi;
  Index sweeps = 1;
  /// Jacobi weight; unset picks 2/3 (damped) or 0.8 (weighted).
  std::optional<Real> omega;
  Index chebyshev_degree = 3;
  Real chebyshev_ratio = 30.0;      // lambda_min = lambda_max / ratio
  Real chebyshev_safety = 1.1;      // applied to the power-iteration estimate
  Index power_iterations = 10;

  Real weight() const;
  void validate() const;
};

std::string to_string(SmootherKind k);
SmootherKind smoother_from_string(const std::string& s);

/// Per-level smoother state (inverse diagonal, spectral bound, GS factor).
class Smoother {
 public:
  Smoother() = default;
  Smoother(const SparseCsr& a, const SmootherConfig& cfg);

  /// Applies cfg.sweeps sweeps (or `sweeps` when given) to x in place.
  void apply(const HecMatrix& a, std::span<const Real> b, std::span<Real> x,
             std::optional<Index> sweeps = std::nullopt) const;

  const SmootherConfig& config() const noexcept { return cfg_; }
  Real lambda_max() const noexcept { return lambda_max_; }

 private:
  SmootherConfig cfg_;
  Vector inv_diag_;
  Real lambda_max_ = 0.0;
  SparseCsr lower_;  // D + strict lower part of A, for Gauss-Seidel
  LevelSchedule lower_schedule_;
};

/// Largest eigenvalue estimate of D^{-1} A by power iteration.
Real estimate_lambda_max(const SparseCsr& a, Index iterations);

/// One-shot smoothing: x' = smoothed x for A x = b.
void smooth(const SparseCsr& a, std::span<Real> x, std::span<const Real> b,
            const SmootherConfig& cfg);

// ---------------------------------------------------------------------------
// Hierarchy

enum class Coarsening { RugeStueben, Cljp };
enum class Interpolation { Direct, Standard };

std::string to_string(Coarsening c);
std::string to_string(Interpolation i);
Coarsening coarsening_from_string(const std::string& s);
Interpolation interpolation_from_string(const std::string& s);

struct AmgOptions {
  Coarsening coarsening = Coarsening::RugeStueben;
  Interpolation interpolation = Interpolation::Direct;
  StrengthOptions strength;
  SmootherConfig smoother;
  Index max_levels = 8;
  Index coarse_size = 64;   // levels at or below this size are solved directly
  Index pre_sweeps = 3;
  Index post_sweeps = 3;
  std::uint64_t seed = 20240611;
};

/// Dense LU with partial pivoting for the coarsest level.
class DenseLu {
 public:
  DenseLu() = default;
  explicit DenseLu(const SparseCsr& a);
  void solve(std::span<const Real> b, std::span<Real> x) const;
  Index size() const noexcept { return n_; }

 private:
  Index n_ = 0;
  std::vector<Real> lu_;  // row-major
  std::vector<Index> piv_;
};

struct AmgLevel {
  SparseCsr a;
  HecMatrix a_hec;
  SparseCsr p;  // prolongation to this level from the next coarser one
  SparseCsr r;  // restriction, p^T
  HecMatrix p_hec;
  HecMatrix r_hec;
  Smoother smoother;

  Index size() const noexcept { return a.n_rows; }
};

struct AmgHierarchy {
  AmgOptions options;
  std::vector<AmgLevel> levels;  // levels[0] finest, levels.back() coarsest
  DenseLu coarse_solver;
  std::vector<std::string> warnings;
  double setup_seconds = 0.0;

  Index n_levels() const noexcept { return static_cast<Index>(levels.size()); }
  /// sum n_l / n_0
  Real grid_complexity() const;
  /// sum nnz_l / nnz_0
  Real operator_complexity() const;
  /// Per-level table: level, rows, nnz, nnz/row; then both complexities.
  std::string summary() const;
};

AmgHierarchy amg_setup(const SparseCsr& a, const AmgOptions& opts = {});

/// One V-cycle starting at `level`, updating x in place.
void vcycle(const AmgHierarchy& h, std::span<const Real> b, std::span<Real> x, Index level = 0);

/// Repeats V-cycles until the relative residual meets cfg.tolerance.
/// Growth of the residual over 3 consecutive cycles is reported as divergence.
SolveResult amg_solve(const AmgHierarchy& h, std::span<const Real> b, const SolverConfig& cfg = {});

/// One V-cycle from a zero guess as z = M^{-1} r.
class AmgPreconditioner final : public Preconditioner {
 public:
  AmgPreconditioner(const SparseCsr& a, const AmgOptions& opts = {});
  Index size() const override { return h_.levels.front().size(); }
  void apply(std::span<const Real> r, std::span<Real> z) const override;
  std::string name() const override { return "amg"; }
  const AmgHierarchy& hierarchy() const noexcept { return h_; }

 private:
  AmgHierarchy h_;
};

}  // namespace hecsolve::amg
