// hecbench: experiment harness for the hecsolve library.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "hecsolve/amg.hpp"
#include "hecsolve/bench.hpp"
#include "hecsolve/hec.hpp"
#include "hecsolve/linear_operator.hpp"
#include "hecsolve/matrix_market.hpp"
#include "hecsolve/poisson.hpp"

namespace hb = hecsolve::bench;
namespace amg = hecsolve::amg;
using hecsolve::Index;

namespace {

struct MatrixArgs {
  std::string file;
  std::vector<Index> poisson;  // n or nx ny nz

  void add(CLI::App* cmd) {
    cmd->add_option("--matrix", file, "Matrix Market file");
    cmd->add_option("--poisson", poisson, "Generate a 3D Poisson grid: N or NX NY NZ")
        ->expected(1, 3);
  }
  hb::MatrixSource source() const {
    if (!file.empty() && !poisson.empty()) throw hecsolve::Error("give either --matrix or --poisson");
    if (!file.empty()) return hb::MatrixSource::file(file);
    if (poisson.size() == 1) return hb::MatrixSource::poisson(poisson[0], poisson[0], poisson[0]);
    if (poisson.size() == 3) return hb::MatrixSource::poisson(poisson[0], poisson[1], poisson[2]);
    throw hecsolve::Error("a matrix is required: --matrix FILE or --poisson N | NX NY NZ");
  }
};

struct SpecArgs {
  hb::ExperimentSpec spec;
  std::string solver = "bicgstab";
  std::string precond = "ras_ilu";
  std::string coarsening = "rs";
  std::string interpolation = "direct";
  std::string smoother = "djacobi";

  void add(CLI::App* cmd, bool solver_fields) {
    if (solver_fields) {
      cmd->add_option("--solver", solver, "bicgstab | gmres | cg | amg")->capture_default_str();
      cmd->add_option("--precond", precond, "none | ilu | ras_ilu | amg")->capture_default_str();
      cmd->add_option("--k", spec.k, "ILU fill level")->capture_default_str();
      cmd->add_option("--outer-parts", spec.outer_parts)->capture_default_str();
      cmd->add_option("--inner-parts", spec.inner_parts)->capture_default_str();
      cmd->add_option("--outer-overlap", spec.outer_overlap)->capture_default_str();
      cmd->add_option("--inner-overlap", spec.inner_overlap)->capture_default_str();
      cmd->add_option("--coarsening", coarsening, "rs | cljp")->capture_default_str();
      cmd->add_option("--interpolation", interpolation, "direct | standard")->capture_default_str();
      cmd->add_option("--smoother", smoother, "djacobi | wjacobi | chebyshev | gs")->capture_default_str();
    }
    cmd->add_option("--max-levels", spec.amg.max_levels)->capture_default_str();
    cmd->add_option("--pre-sweeps", spec.amg.pre_sweeps)->capture_default_str();
    cmd->add_option("--post-sweeps", spec.amg.post_sweeps)->capture_default_str();
    cmd->add_option("--seed", spec.amg.seed, "CLJP seed")->capture_default_str();
    cmd->add_option("--tolerance", spec.tolerance)->capture_default_str();
    cmd->add_option("--max-iterations", spec.max_iterations)->capture_default_str();
    cmd->add_option("--restart", spec.restart, "GMRES restart length")->capture_default_str();
    cmd->add_option("--workers", spec.workers, "worker counts for the parallel runs (default: all cores)");
    cmd->add_option("--repetitions", spec.repetitions)->capture_default_str();
    cmd->add_option("--warmup", spec.warmup)->capture_default_str();
  }
  hb::ExperimentSpec resolve(const MatrixArgs& m) const {
    hb::ExperimentSpec s = spec;
    s.matrix = m.source();
    s.solver = hb::solver_from_string(solver);
    s.precond = hb::precond_from_string(precond);
    s.amg.coarsening = amg::coarsening_from_string(coarsening);
    s.amg.interpolation = amg::interpolation_from_string(interpolation);
    s.amg.smoother.kind = amg::smoother_from_string(smoother);
    return s;
  }
};

struct OutputArgs {
  std::string csv, json;
  void add(CLI::App* cmd) {
    cmd->add_option("--csv", csv, "write the report as CSV");
    cmd->add_option("--json", json, "write the report as JSON");
  }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw hecsolve::Error("cannot write " + path);
  out << text;
}

void print_rows(const std::vector<hb::ReportRow>& rows) {
  for (const auto& r : rows) {
    std::cout << (r.spec.name.empty() ? r.spec.matrix.label() : r.spec.name) << ": ";
    if (r.status != "ok") {
      std::cout << "error: " << r.error << '\n';
      continue;
    }
    std::cout << "n=" << r.n_rows << " nnz=" << r.nnz << " iterations=" << r.iterations
              << " converged=" << (r.converged ? "yes" : "no")
              << " residual=" << r.final_relative_residual << " seq=" << r.sequential_seconds << "s";
    for (const auto& t : r.parallel)
      std::cout << " w" << t.workers << "=" << t.seconds << "s (x" << t.speedup << ")";
    if (r.comm_volume) std::cout << " comm=" << r.comm_volume;
    if (r.amg_levels) std::cout << " levels=" << r.amg_levels << " gc=" << r.grid_complexity;
    if (!r.breakdown.empty()) std::cout << " [" << r.breakdown << "]";
    std::cout << '\n';
  }
}

int emit(const std::vector<hb::ReportRow>& rows, const OutputArgs& out) {
  print_rows(rows);
  if (!out.csv.empty()) write_file(out.csv, hb::rows_to_csv(rows));
  if (!out.json.empty()) write_file(out.json, hb::rows_to_json(rows));
  const bool all_failed =
      !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.status != "ok"; });
  return all_failed ? 2 : 0;
}

void print_info(const hecsolve::SparseCsr& a, Index parts, bool with_amg, const amg::AmgOptions& opts) {
  const auto hec = hecsolve::hec_from_csr(a);
  std::cout << "rows " << a.n_rows << "\ncols " << a.n_cols << "\nnnz " << a.nnz() << '\n';
  if (a.n_rows > 0)
    std::cout << "nnz/row " << static_cast<double>(a.nnz()) / a.n_rows << '\n';
  std::cout << "ell width " << hec.ell_width << "\nell stride " << hec.ell_stride
            << "\ncsr remainder nnz " << hec.csr_rest.nnz() << '\n';
  std::cout << "symmetric " << (a.square() && a == hecsolve::transpose(a) ? "yes" : "no") << '\n';
  if (parts > 0) {
    const hecsolve::PartitionedOperator op(a, parts);
    std::cout << "parts " << parts << "\ncomm volume per product " << op.exchange_volume() << '\n';
  }
  if (with_amg) std::cout << amg::amg_setup(a, opts).summary();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse solver experiment harness"};
  app.require_subcommand(1);

  // spmv-bench
  auto* spmv_cmd = app.add_subcommand("spmv-bench", "Time CSR and HEC SpMV");
  std::vector<std::string> spmv_files;
  std::vector<Index> spmv_poisson;
  Index spmv_workers = static_cast<Index>(std::max(1u, std::thread::hardware_concurrency()));
  Index spmv_reps = 3, spmv_warmup = 1;
  OutputArgs spmv_out;
  spmv_cmd->add_option("files", spmv_files, "Matrix Market files");
  spmv_cmd->add_option("--poisson", spmv_poisson, "also benchmark poisson N^3 (repeatable)");
  spmv_cmd->add_option("--max-workers", spmv_workers)->capture_default_str();
  spmv_cmd->add_option("--repetitions", spmv_reps)->capture_default_str();
  spmv_cmd->add_option("--warmup", spmv_warmup)->capture_default_str();
  spmv_out.add(spmv_cmd);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Run one experiment");
  MatrixArgs solve_matrix;
  SpecArgs solve_spec;
  OutputArgs solve_out;
  solve_matrix.add(solve_cmd);
  solve_spec.add(solve_cmd, true);
  solve_out.add(solve_cmd);

  // grid
  auto* grid_cmd = app.add_subcommand("grid", "Run a named experiment grid");
  MatrixArgs grid_matrix;
  SpecArgs grid_spec;
  OutputArgs grid_out;
  std::vector<std::string> grids;
  grid_cmd->add_option("--grid", grids, "ras | overlap | amg (repeatable)")->required();
  grid_matrix.add(grid_cmd);
  grid_spec.add(grid_cmd, false);
  grid_out.add(grid_cmd);

  // gen-poisson
  auto* gen_cmd = app.add_subcommand("gen-poisson", "Write a 3D Poisson matrix");
  std::vector<Index> gen_dims;
  std::string gen_output;
  gen_cmd->add_option("dims", gen_dims, "N or NX NY NZ")->required()->expected(1, 3);
  gen_cmd->add_option("-o,--output", gen_output, "Matrix Market output file");

  // info
  auto* info_cmd = app.add_subcommand("info", "Describe a matrix");
  MatrixArgs info_matrix;
  Index info_parts = 0;
  bool info_amg = false;
  std::string info_coarsening = "rs", info_interpolation = "direct";
  info_matrix.add(info_cmd);
  info_cmd->add_option("--parts", info_parts, "report the exchange volume for this many parts");
  info_cmd->add_flag("--amg", info_amg, "print the AMG hierarchy summary");
  info_cmd->add_option("--coarsening", info_coarsening)->capture_default_str();
  info_cmd->add_option("--interpolation", info_interpolation)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*spmv_cmd) {
      std::vector<hb::MatrixSource> sources;
      for (const auto& f : spmv_files) sources.push_back(hb::MatrixSource::file(f));
      for (Index n : spmv_poisson) sources.push_back(hb::MatrixSource::poisson(n, n, n));
      const auto rows = hb::spmv_bench(sources, spmv_workers, spmv_reps, spmv_warmup);
      for (const auto& r : rows) {
        if (r.status != "ok") {
          std::cout << r.matrix << ": error: " << r.error << '\n';
          continue;
        }
        std::cout << r.matrix << " n=" << r.n_rows << " nnz=" << r.nnz << " " << r.format << " w"
                  << r.workers << " " << r.seconds << "s " << r.gflops << " GFlop/s"
                  << " maxdiff=" << r.max_relative_difference << '\n';
      }
      if (!spmv_out.csv.empty()) write_file(spmv_out.csv, hb::spmv_to_csv(rows));
      if (!spmv_out.json.empty()) write_file(spmv_out.json, hb::spmv_to_json(rows));
      return 0;
    }
    if (*solve_cmd) {
      hb::ExperimentSpec spec = solve_spec.resolve(solve_matrix);
      spec.name = spec.matrix.label();
      return emit({hb::run_experiment(spec)}, solve_out);
    }
    if (*grid_cmd) {
      const hb::ExperimentSpec base = grid_spec.resolve(grid_matrix);
      std::vector<hb::ExperimentSpec> specs;
      for (const auto& g : grids) {
        auto part = hb::make_grid(g, base);
        specs.insert(specs.end(), part.begin(), part.end());
      }
      return emit(hb::run_grid(specs), grid_out);
    }
    if (*gen_cmd) {
      const Index nx = gen_dims[0];
      const Index ny = gen_dims.size() == 3 ? gen_dims[1] : nx;
      const Index nz = gen_dims.size() == 3 ? gen_dims[2] : nx;
      const auto a = hecsolve::poisson3d(nx, ny, nz);
      std::cout << "rows " << a.n_rows << "\nnnz " << a.nnz() << '\n';
      if (!gen_output.empty()) hecsolve::write_matrix_market(gen_output, a);
      return 0;
    }
    if (*info_cmd) {
      amg::AmgOptions opts;
      opts.coarsening = amg::coarsening_from_string(info_coarsening);
      opts.interpolation = amg::interpolation_from_string(info_interpolation);
      print_info(info_matrix.source().load(), info_parts, info_amg, opts);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "hecbench: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
