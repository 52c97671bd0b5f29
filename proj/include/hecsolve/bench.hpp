#pragma once

#include <string>
#include <vector>

#include "hecsolve/amg.hpp"
#include "hecsolve/csr.hpp"

namespace hecsolve::bench {

enum class SolverKind { Bicgstab, Gmres, Cg, Amg };
enum class PrecondKind { None, Ilu, RasIlu, Amg };

std::string to_string(SolverKind s);
std::string to_string(PrecondKind p);
SolverKind solver_from_string(const std::string& s);
PrecondKind precond_from_string(const std::string& s);

/// Either a Matrix Market file or a generated 3D Poisson grid.
struct MatrixSource {
  std::string path;
  Index nx = 0, ny = 0, nz = 0;

  static MatrixSource file(std::string p);
  static MatrixSource poisson(Index nx, Index ny, Index nz);
  bool is_file() const noexcept { return !path.empty(); }
  std::string label() const;
  SparseCsr load() const;
};

struct ExperimentSpec {
  std::string name;
  MatrixSource matrix;
  SolverKind solver = SolverKind::Bicgstab;
  PrecondKind precond = PrecondKind::RasIlu;
  Index k = 0;
  Index outer_parts = 1;
  Index inner_parts = 1;
  Index outer_overlap = 0;
  Index inner_overlap = 0;
  amg::AmgOptions amg;
  Real tolerance = 1e-6;
  Index max_iterations = 1000;
  Index restart = 30;
  /// Worker counts for the parallel runs; empty means the machine maximum.
  std::vector<Index> workers;
  Index repetitions = 3;
  Index warmup = 1;

  void validate() const;
};

struct WorkerTiming {
  Index workers = 0;
  double seconds = 0.0;
  double speedup = 0.0;  // sequential seconds / seconds
};

struct ReportRow {
  ExperimentSpec spec;
  std::string status = "ok";  // ok | error
  std::string error;
  Index n_rows = 0;
  Offset nnz = 0;
  Index iterations = 0;
  bool converged = false;
  Real final_relative_residual = 0.0;
  std::string breakdown;
  double setup_seconds = 0.0;
  double sequential_seconds = 0.0;
  std::vector<WorkerTiming> parallel;
  Offset comm_volume = 0;
  // AMG hierarchy statistics, zero for other solvers
  Index amg_levels = 0;
  Real grid_complexity = 0.0;
  Real operator_complexity = 0.0;
};

/// Runs one experiment: sequential timing with one worker, then each
/// requested worker count. Timings are best of `repetitions` after
/// `warmup` discarded runs. Load failures and solver errors are captured
/// into the row.
ReportRow run_experiment(const ExperimentSpec& spec);

/// Named experiment grids over a base spec (matrix, tolerance, timing
/// fields are taken from the base):
///   "ras"     outer/inner block counts {1,8},{2,8},{3,8},{4,8},{4,128},{4,1024} x k 0..3
///   "overlap" outer 4, inner 8, k 0, overlaps {0,1} x {0,1}
///   "amg"     five coarsening/interpolation/smoother combinations
/// Krylov grids are emitted once for BiCGSTAB and once for GMRES.
std::vector<ExperimentSpec> make_grid(const std::string& grid, const ExperimentSpec& base);
std::vector<std::string> grid_names();

std::vector<ReportRow> run_grid(const std::vector<ExperimentSpec>& specs);

struct SpmvRow {
  std::string matrix;
  std::string status = "ok";
  std::string error;
  Index n_rows = 0;
  Offset nnz = 0;
  std::string format;  // csr | hec
  Index workers = 0;
  double seconds = 0.0;  // best time of one product
  double gflops = 0.0;   // 2 nnz / seconds
  Real max_relative_difference = 0.0;  // HEC vs CSR
};

/// Times y = A x for CSR and HEC at one worker and at `max_workers`.
std::vector<SpmvRow> spmv_bench(const std::vector<MatrixSource>& matrices, Index max_workers,
                                Index repetitions = 3, Index warmup = 1);

// Report serialization. Column order of the CSV equals the key order of
// the JSON objects.
std::string rows_to_csv(const std::vector<ReportRow>& rows);
std::string rows_to_json(const std::vector<ReportRow>& rows);
/// Header plus rows of a JSON report, each value rendered as its CSV cell.
std::vector<std::vector<std::string>> json_report_table(const std::string& json_text);
/// RFC 4180 style reader: quoted fields, doubled quotes, LF or CRLF.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

std::string spmv_to_csv(const std::vector<SpmvRow>& rows);
std::string spmv_to_json(const std::vector<SpmvRow>& rows);

/// Timing protocol recorded in report metadata.
std::string timing_method();

}  // namespace hecsolve::bench
