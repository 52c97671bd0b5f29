#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hecsolve/linear_operator.hpp"
#include "hecsolve/preconditioner.hpp"

namespace hecsolve {

struct SolverConfig {
  Real tolerance = 1e-6;  // on ||b - A x||_2 / ||b||_2
  Index max_iterations = 1000;
  Index restart = 30;     // GMRES cycle length
  std::optional<Vector> initial_guess;

  void validate(Index n) const;
};

struct SolveTimings {
  double setup = 0.0;    // preconditioner construction
  double apply = 0.0;    // whole iteration loop
  double spmv = 0.0;
  double precond = 0.0;
};

struct SolveReport {
  Index iterations = 0;
  /// ||b - A x||_2 / ||b||_2 of the returned x, recomputed from scratch.
  Real final_relative_residual = 0.0;
  /// Last residual estimate carried by the recurrence.
  Real recursive_relative_residual = 0.0;
  bool converged = false;
  std::optional<std::string> breakdown;
  SolveTimings timings;
  /// Values moved through the exchange cache over the whole solve.
  Offset comm_volume = 0;
  std::vector<Real> residual_history;
};

struct SolveResult {
  Vector x;
  SolveReport report;
};

/// Preconditioned BiCGSTAB with the preconditioner solves inline
/// (p* = M^{-1} p, s* = M^{-1} s). Stops early on a small ||s||; reports
/// breakdown when rho or omega vanishes.
SolveResult bicgstab(const LinearOperator& a, const Preconditioner& m, std::span<const Real> b,
                     const SolverConfig& cfg = {});

/// Right-preconditioned restarted GMRES(m), modified Gram-Schmidt Arnoldi,
/// Givens rotations for the least-squares residual.
SolveResult gmres(const LinearOperator& a, const Preconditioner& m, std::span<const Real> b,
                  const SolverConfig& cfg = {});

/// Preconditioned CG for SPD systems. p^T A p <= 0 is reported as an
/// indefiniteness breakdown.
SolveResult cg(const LinearOperator& a, const Preconditioner& m, std::span<const Real> b,
               const SolverConfig& cfg = {});

}  // namespace hecsolve
