#include "hecsolve/bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <span>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "hecsolve/krylov.hpp"
#include "hecsolve/matrix_market.hpp"
#include "hecsolve/parallel.hpp"
#include "hecsolve/poisson.hpp"
#include "hecsolve/ras.hpp"
#include "hecsolve/timer.hpp"

namespace hecsolve::bench {

using nlohmann::json;
using nlohmann::ordered_json;

std::string to_string(SolverKind s) {
  switch (s) {
    case SolverKind::Bicgstab: return "bicgstab";
    case SolverKind::Gmres: return "gmres";
    case SolverKind::Cg: return "cg";
    case SolverKind::Amg: return "amg";
  }
  return "?";
}

std::string to_string(PrecondKind p) {
  switch (p) {
    case PrecondKind::None: return "none";
    case PrecondKind::Ilu: return "ilu";
    case PrecondKind::RasIlu: return "ras_ilu";
    case PrecondKind::Amg: return "amg";
  }
  return "?";
}

SolverKind solver_from_string(const std::string& s) {
  if (s == "bicgstab") return SolverKind::Bicgstab;
  if (s == "gmres") return SolverKind::Gmres;
  if (s == "cg") return SolverKind::Cg;
  if (s == "amg") return SolverKind::Amg;
  throw Error("unknown solver '" + s + "' (bicgstab, gmres, cg, amg)");
}

PrecondKind precond_from_string(const std::string& s) {
  if (s == "none") return PrecondKind::None;
  if (s == "ilu") return PrecondKind::Ilu;
  if (s == "ras_ilu") return PrecondKind::RasIlu;
  if (s == "amg") return PrecondKind::Amg;
  throw Error("unknown preconditioner '" + s + "' (none, ilu, ras_ilu, amg)");
}

MatrixSource MatrixSource::file(std::string p) {
  MatrixSource m;
  m.path = std::move(p);
  return m;
}

MatrixSource MatrixSource::poisson(Index nx, Index ny, Index nz) {
  MatrixSource m;
  m.nx = nx;
  m.ny = ny;
  m.nz = nz;
  return m;
}

std::string MatrixSource::label() const {
  if (is_file()) return path;
  return "poisson:" + std::to_string(nx) + "x" + std::to_string(ny) + "x" + std::to_string(nz);
}

SparseCsr MatrixSource::load() const {
  if (is_file()) return read_matrix_market(path);
  return poisson3d(nx, ny, nz);
}

void ExperimentSpec::validate() const {
  if (k < 0) throw Error("spec: k must be >= 0");
  if (outer_parts < 1 || inner_parts < 1) throw Error("spec: part counts must be >= 1");
  if (outer_overlap < 0 || inner_overlap < 0) throw Error("spec: overlaps must be >= 0");
  if (!(tolerance > 0.0)) throw Error("spec: tolerance must be > 0");
  if (max_iterations < 0) throw Error("spec: max_iterations must be >= 0");
  if (restart < 1) throw Error("spec: restart must be >= 1");
  if (repetitions < 1) throw Error("spec: repetitions must be >= 1");
  if (warmup < 0) throw Error("spec: warmup must be >= 0");
  for (Index w : workers)
    if (w < 1) throw Error("spec: worker counts must be >= 1");
  amg.smoother.validate();
}

namespace {

Index machine_workers() {
  return static_cast<Index>(std::max(1u, std::thread::hardware_concurrency()));
}

struct RunOutcome {
  SolveReport report;
  double setup_seconds = 0.0;
  double total_seconds = 0.0;
  Index amg_levels = 0;
  Real grid_complexity = 0.0;
  Real operator_complexity = 0.0;
};

std::unique_ptr<Preconditioner> make_preconditioner(const ExperimentSpec& spec, const SparseCsr& a) {
  switch (spec.precond) {
    case PrecondKind::None: return std::make_unique<IdentityPreconditioner>(a.n_rows);
    case PrecondKind::Ilu: return std::make_unique<IluPreconditioner>(a, spec.k);
    case PrecondKind::RasIlu: {
      RasOptions o;
      o.outer_parts = spec.outer_parts;
      o.inner_parts = spec.inner_parts;
      o.outer_overlap = spec.outer_overlap;
      o.inner_overlap = spec.inner_overlap;
      o.fill_level = spec.k;
      return std::make_unique<RasIluPreconditioner>(a, o);
    }
    case PrecondKind::Amg: return std::make_unique<amg::AmgPreconditioner>(a, spec.amg);
  }
  throw Error("unhandled preconditioner");
}

RunOutcome run_once(const ExperimentSpec& spec, const SparseCsr& a, const LinearOperator& op,
                    std::span<const Real> b) {
  RunOutcome out;
  SolverConfig cfg;
  cfg.tolerance = spec.tolerance;
  cfg.max_iterations = spec.max_iterations;
  cfg.restart = spec.restart;

  Stopwatch total;
  if (spec.solver == SolverKind::Amg) {
    const amg::AmgHierarchy h = amg::amg_setup(a, spec.amg);
    out.setup_seconds = h.setup_seconds;
    out.report = amg::amg_solve(h, b, cfg).report;
    out.amg_levels = h.n_levels();
    out.grid_complexity = h.grid_complexity();
    out.operator_complexity = h.operator_complexity();
  } else {
    const auto m = make_preconditioner(spec, a);
    out.setup_seconds = m->setup_seconds();
    if (spec.solver == SolverKind::Bicgstab) out.report = bicgstab(op, *m, b, cfg).report;
    else if (spec.solver == SolverKind::Gmres) out.report = gmres(op, *m, b, cfg).report;
    else out.report = cg(op, *m, b, cfg).report;
    if (const auto* amg_m = dynamic_cast<const amg::AmgPreconditioner*>(m.get())) {
      out.amg_levels = amg_m->hierarchy().n_levels();
      out.grid_complexity = amg_m->hierarchy().grid_complexity();
      out.operator_complexity = amg_m->hierarchy().operator_complexity();
    }
  }
  out.total_seconds = total.seconds();
  return out;
}

/// Best wall time over the timed repetitions; the first timed outcome is
/// returned through `first`.
double timed_runs(const ExperimentSpec& spec, const SparseCsr& a, const LinearOperator& op,
                  std::span<const Real> b, Index workers, RunOutcome* first) {
  WorkerScope scope(static_cast<int>(workers));
  for (Index i = 0; i < spec.warmup; ++i) run_once(spec, a, op, b);
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < spec.repetitions; ++i) {
    RunOutcome o = run_once(spec, a, op, b);
    best = std::min(best, o.total_seconds);
    if (i == 0 && first) *first = std::move(o);
  }
  return best;
}

}  // namespace

ReportRow run_experiment(const ExperimentSpec& spec) {
  ReportRow row;
  row.spec = spec;
  try {
    spec.validate();
    const SparseCsr a = spec.matrix.load();
    require_dims(a.square(), "matrix must be square");
    row.n_rows = a.n_rows;
    row.nnz = a.nnz();
    const Vector b(a.n_rows, 1.0);

    std::unique_ptr<LinearOperator> op;
    if (spec.precond == PrecondKind::RasIlu && spec.outer_parts > 1 && spec.solver != SolverKind::Amg)
      op = std::make_unique<PartitionedOperator>(a, spec.outer_parts);
    else
      op = std::make_unique<HecOperator>(a);

    RunOutcome seq;
    row.sequential_seconds = timed_runs(spec, a, *op, b, 1, &seq);
    row.iterations = seq.report.iterations;
    row.converged = seq.report.converged;
    row.final_relative_residual = seq.report.final_relative_residual;
    row.breakdown = seq.report.breakdown.value_or("");
    row.setup_seconds = seq.setup_seconds;
    row.comm_volume = seq.report.comm_volume;
    row.amg_levels = seq.amg_levels;
    row.grid_complexity = seq.grid_complexity;
    row.operator_complexity = seq.operator_complexity;

    std::vector<Index> counts = spec.workers.empty() ? std::vector<Index>{machine_workers()} : spec.workers;
    for (Index w : counts) {
      WorkerTiming t;
      t.workers = w;
      t.seconds = timed_runs(spec, a, *op, b, w, nullptr);
      t.speedup = t.seconds > 0.0 ? row.sequential_seconds / t.seconds : 0.0;
      row.parallel.push_back(t);
    }
  } catch (const std::exception& e) {
    row.status = "error";
    row.error = e.what();
  }
  return row;
}

std::vector<std::string> grid_names() { return {"ras", "overlap", "amg"}; }

std::vector<ExperimentSpec> make_grid(const std::string& grid, const ExperimentSpec& base) {
  std::vector<ExperimentSpec> out;
  auto krylov = [&](auto&& fill) {
    for (SolverKind s : {SolverKind::Bicgstab, SolverKind::Gmres}) {
      ExperimentSpec spec = base;
      spec.solver = s;
      spec.precond = PrecondKind::RasIlu;
      spec.outer_overlap = spec.inner_overlap = 0;
      fill(spec);
    }
  };
  if (grid == "ras") {
    const std::pair<Index, Index> blocks[] = {{1, 8}, {2, 8}, {3, 8}, {4, 8}, {4, 128}, {4, 1024}};
    krylov([&](ExperimentSpec spec) {
      for (std::size_t seq = 0; seq < std::size(blocks); ++seq) {
        for (Index k = 0; k <= 3; ++k) {
          spec.outer_parts = blocks[seq].first;
          spec.inner_parts = blocks[seq].second;
          spec.k = k;
          spec.name = "ras/" + to_string(spec.solver) + "/" + std::to_string(seq + 1) + "/k" +
                      std::to_string(k);
          out.push_back(spec);
        }
      }
    });
  } else if (grid == "overlap") {
    const std::pair<Index, Index> overlaps[] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    krylov([&](ExperimentSpec spec) {
      for (std::size_t seq = 0; seq < std::size(overlaps); ++seq) {
        spec.outer_parts = 4;
        spec.inner_parts = 8;
        spec.k = 0;
        spec.outer_overlap = overlaps[seq].first;
        spec.inner_overlap = overlaps[seq].second;
        spec.name = "overlap/" + to_string(spec.solver) + "/" + std::to_string(seq + 1);
        out.push_back(spec);
      }
    });
  } else if (grid == "amg") {
    using amg::Coarsening;
    using amg::Interpolation;
    using amg::SmootherKind;
    const std::tuple<Coarsening, Interpolation, SmootherKind> combos[] = {
        {Coarsening::Cljp, Interpolation::Direct, SmootherKind::DampedJacobi},
        {Coarsening::Cljp, Interpolation::Direct, SmootherKind::Chebyshev},
        {Coarsening::RugeStueben, Interpolation::Direct, SmootherKind::DampedJacobi},
        {Coarsening::RugeStueben, Interpolation::Standard, SmootherKind::WeightedJacobi},
        {Coarsening::RugeStueben, Interpolation::Standard, SmootherKind::GaussSeidel},
    };
    Index seq = 1;
    for (const auto& [c, i, s] : combos) {
      ExperimentSpec spec = base;
      spec.solver = SolverKind::Amg;
      spec.precond = PrecondKind::None;
      spec.amg.coarsening = c;
      spec.amg.interpolation = i;
      spec.amg.smoother.kind = s;
      spec.name = "amg/" + std::to_string(seq++);
      out.push_back(spec);
    }
  } else {
    throw Error("unknown grid '" + grid + "' (ras, overlap, amg)");
  }
  return out;
}

std::vector<ReportRow> run_grid(const std::vector<ExperimentSpec>& specs) {
  std::vector<ReportRow> rows;
  rows.reserve(specs.size());
  for (const auto& s : specs) rows.push_back(run_experiment(s));
  return rows;
}

// ---------------------------------------------------------------------------
// SpMV benchmark

namespace {

Vector bench_vector(Index n) {
  Vector x(n);
  for (Index i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(0.37 * i);
  return x;
}

template <class Fn>
double best_time(Index repetitions, Index warmup, Fn&& fn) {
  for (Index i = 0; i < warmup; ++i) fn();
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < repetitions; ++i) {
    Stopwatch sw;
    fn();
    best = std::min(best, sw.seconds());
  }
  return best;
}

}  // namespace

std::vector<SpmvRow> spmv_bench(const std::vector<MatrixSource>& matrices, Index max_workers,
                                Index repetitions, Index warmup) {
  if (max_workers < 1) throw Error("spmv_bench: max_workers must be >= 1");
  if (repetitions < 1 || warmup < 0) throw Error("spmv_bench: bad repetition counts");
  std::vector<SpmvRow> rows;
  for (const auto& src : matrices) {
    SpmvRow base;
    base.matrix = src.label();
    SparseCsr a;
    try {
      a = src.load();
    } catch (const std::exception& e) {
      base.status = "error";
      base.error = e.what();
      rows.push_back(base);
      continue;
    }
    base.n_rows = a.n_rows;
    base.nnz = a.nnz();
    const HecMatrix h = hec_from_csr(a);
    const Vector x = bench_vector(a.n_cols);
    Vector y_csr(a.n_rows), y_hec(a.n_rows);
    spmv_csr(a, x, y_csr);
    spmv(h, x, y_hec);
    Real scale = 0.0, diff = 0.0;
    for (Index i = 0; i < a.n_rows; ++i) {
      scale = std::max(scale, std::abs(y_csr[i]));
      diff = std::max(diff, std::abs(y_csr[i] - y_hec[i]));
    }
    base.max_relative_difference = scale > 0.0 ? diff / scale : diff;

    std::vector<Index> counts{1};
    if (max_workers > 1) counts.push_back(max_workers);
    for (const char* format : {"csr", "hec"}) {
      for (Index w : counts) {
        WorkerScope scope(static_cast<int>(w));
        SpmvRow row = base;
        row.format = format;
        row.workers = w;
        row.seconds = row.format == "csr"
                          ? best_time(repetitions, warmup, [&] { spmv_csr(a, x, y_csr); })
                          : best_time(repetitions, warmup, [&] { spmv(h, x, y_hec); });
        row.gflops = row.seconds > 0.0 ? 2.0 * static_cast<double>(row.nnz) / row.seconds * 1e-9 : 0.0;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ';';
    s += parts[i];
  }
  return s;
}

ordered_json row_object(const ReportRow& r) {
  const ExperimentSpec& s = r.spec;
  std::vector<std::string> workers, seconds, speedups;
  for (const auto& t : r.parallel) {
    workers.push_back(json(t.workers).dump());
    seconds.push_back(json(t.seconds).dump());
    speedups.push_back(json(t.speedup).dump());
  }
  ordered_json o;
  o["name"] = s.name;
  o["matrix"] = s.matrix.label();
  o["solver"] = to_string(s.solver);
  o["precond"] = to_string(s.precond);
  o["k"] = s.k;
  o["outer_parts"] = s.outer_parts;
  o["inner_parts"] = s.inner_parts;
  o["outer_overlap"] = s.outer_overlap;
  o["inner_overlap"] = s.inner_overlap;
  o["coarsening"] = amg::to_string(s.amg.coarsening);
  o["interpolation"] = amg::to_string(s.amg.interpolation);
  o["smoother"] = amg::to_string(s.amg.smoother.kind);
  o["max_levels"] = s.amg.max_levels;
  o["pre_sweeps"] = s.amg.pre_sweeps;
  o["post_sweeps"] = s.amg.post_sweeps;
  o["tolerance"] = s.tolerance;
  o["status"] = r.status;
  o["error"] = r.error;
  o["n_rows"] = r.n_rows;
  o["nnz"] = r.nnz;
  o["iterations"] = r.iterations;
  o["converged"] = r.converged;
  o["final_relative_residual"] = r.final_relative_residual;
  o["breakdown"] = r.breakdown;
  o["comm_volume"] = r.comm_volume;
  o["amg_levels"] = r.amg_levels;
  o["grid_complexity"] = r.grid_complexity;
  o["operator_complexity"] = r.operator_complexity;
  o["setup_seconds"] = r.setup_seconds;
  o["sequential_seconds"] = r.sequential_seconds;
  o["parallel_workers"] = join(workers);
  o["parallel_seconds"] = join(seconds);
  o["speedup"] = join(speedups);
  return o;
}

ordered_json spmv_object(const SpmvRow& r) {
  ordered_json o;
  o["matrix"] = r.matrix;
  o["status"] = r.status;
  o["error"] = r.error;
  o["n_rows"] = r.n_rows;
  o["nnz"] = r.nnz;
  o["format"] = r.format;
  o["workers"] = r.workers;
  o["seconds"] = r.seconds;
  o["gflops"] = r.gflops;
  o["max_relative_difference"] = r.max_relative_difference;
  return o;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string cell_text(const ordered_json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

std::string objects_to_csv(const std::vector<ordered_json>& objs, const ordered_json& header_source) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, _] : header_source.items()) {
    os << (first ? "" : ",") << csv_escape(key);
    first = false;
  }
  os << '\n';
  for (const auto& o : objs) {
    first = true;
    for (const auto& [key, value] : o.items()) {
      os << (first ? "" : ",") << csv_escape(cell_text(value));
      first = false;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace

std::string timing_method() {
  return "steady clock wall time; best of the timed repetitions after discarded warmup runs; "
         "sequential = 1 worker";
}

std::string rows_to_csv(const std::vector<ReportRow>& rows) {
  std::vector<ordered_json> objs;
  for (const auto& r : rows) objs.push_back(row_object(r));
  return objects_to_csv(objs, row_object(ReportRow{}));
}

std::string rows_to_json(const std::vector<ReportRow>& rows) {
  ordered_json doc;
  doc["timing"] = timing_method();
  doc["rows"] = ordered_json::array();
  for (const auto& r : rows) doc["rows"].push_back(row_object(r));
  return doc.dump(2) + "\n";
}

std::vector<std::vector<std::string>> json_report_table(const std::string& text) {
  const ordered_json doc = ordered_json::parse(text);
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> header;
  const ordered_json layout = row_object(ReportRow{});
  for (const auto& [key, _] : layout.items()) header.push_back(key);
  table.push_back(header);
  for (const auto& o : doc.at("rows")) {
    std::vector<std::string> cells;
    for (const auto& key : header) cells.push_back(cell_text(o.at(key)));
    table.push_back(std::move(cells));
  }
  return table;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> record;
  std::string cell;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      record.push_back(std::move(cell));
      cell.clear();
      any = true;
    } else if (c == '\n') {
      record.push_back(std::move(cell));
      cell.clear();
      table.push_back(std::move(record));
      record.clear();
      any = false;
    } else if (c != '\r') {
      cell += c;
      any = true;
    }
  }
  if (quoted) throw FormatError("csv: unterminated quoted field");
  if (any) {
    record.push_back(std::move(cell));
    table.push_back(std::move(record));
  }
  return table;
}

std::string spmv_to_csv(const std::vector<SpmvRow>& rows) {
  std::vector<ordered_json> objs;
  for (const auto& r : rows) objs.push_back(spmv_object(r));
  return objects_to_csv(objs, spmv_object(SpmvRow{}));
}

std::string spmv_to_json(const std::vector<SpmvRow>& rows) {
  ordered_json doc;
  doc["timing"] = timing_method();
  doc["rows"] = ordered_json::array();
  for (const auto& r : rows) doc["rows"].push_back(spmv_object(r));
  return doc.dump(2) + "\n";
}

}  // namespace hecsolve::bench
