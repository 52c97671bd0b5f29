#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>

#include "hecsolve/amg.hpp"
#include "hecsolve/timer.hpp"
#include "hecsolve/vector_ops.hpp"

namespace hecsolve::amg {

namespace {

/// Coarsest levels above this size are not factorized densely.
constexpr Index kDenseLimit = 4096;
/// Smoothing sweeps standing in for the direct solve on an oversized coarsest level.
constexpr Index kCoarseFallbackSweeps = 20;

}  // namespace

std::string to_string(Coarsening c) { return c == Coarsening::RugeStueben ? "rs" : "cljp"; }
std::string to_string(Interpolation i) { return i == Interpolation::Direct ? "direct" : "standard"; }

Coarsening coarsening_from_string(const std::string& s) {
  if (s == "rs") return Coarsening::RugeStueben;
  if (s == "cljp") return Coarsening::Cljp;
  throw Error("unknown coarsening '" + s + "' (rs, cljp)");
}

Interpolation interpolation_from_string(const std::string& s) {
  if (s == "direct") return Interpolation::Direct;
  if (s == "standard") return Interpolation::Standard;
  throw Error("unknown interpolation '" + s + "' (direct, standard)");
}

DenseLu::DenseLu(const SparseCsr& a) : n_(a.n_rows) {
  require_dims(a.square(), "DenseLu: matrix must be square");
  const auto n = static_cast<std::size_t>(n_);
  lu_.assign(n * n, 0.0);
  piv_.resize(n);
  for (Index i = 0; i < n_; ++i)
    for (Offset k = a.row_begin(i); k < a.row_end(i); ++k) lu_[i * n + a.col_idx[k]] = a.values[k];

  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(lu_[r * n + c]) > std::abs(lu_[p * n + c])) p = r;
    piv_[c] = static_cast<Index>(p);
    if (lu_[p * n + c] == 0.0)
      throw ZeroPivotError("DenseLu: singular matrix at column " + std::to_string(c),
                           static_cast<Index>(c));
    if (p != c)
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_[c * n + j], lu_[p * n + j]);
    const Real inv = 1.0 / lu_[c * n + c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const Real f = lu_[r * n + c] * inv;
      lu_[r * n + c] = f;
      if (f == 0.0) continue;
      for (std::size_t j = c + 1; j < n; ++j) lu_[r * n + j] -= f * lu_[c * n + j];
    }
  }
}

void DenseLu::solve(std::span<const Real> b, std::span<Real> x) const {
  const auto n = static_cast<std::size_t>(n_);
  require_dims(b.size() == n && x.size() == n, "DenseLu: size mismatch");
  Vector y(b.begin(), b.end());
  for (std::size_t c = 0; c < n; ++c) std::swap(y[c], y[piv_[c]]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) y[i] -= lu_[i * n + j] * y[j];
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) y[i] -= lu_[i * n + j] * y[j];
    y[i] /= lu_[i * n + i];
  }
  std::copy(y.begin(), y.end(), x.begin());
}

Real AmgHierarchy::grid_complexity() const {
  if (levels.empty()) return 0.0;
  Real total = 0.0;
  for (const auto& l : levels) total += l.size();
  return total / levels.front().size();
}

Real AmgHierarchy::operator_complexity() const {
  if (levels.empty()) return 0.0;
  Real total = 0.0;
  for (const auto& l : levels) total += static_cast<Real>(l.a.nnz());
  return total / static_cast<Real>(levels.front().a.nnz());
}

std::string AmgHierarchy::summary() const {
  std::ostringstream os;
  os << std::setw(6) << "level" << std::setw(12) << "rows" << std::setw(14) << "nnz"
     << std::setw(10) << "nnz/row" << '\n';
  for (Index l = 0; l < n_levels(); ++l) {
    const auto& lv = levels[l];
    const Real per_row = lv.size() ? static_cast<Real>(lv.a.nnz()) / lv.size() : 0.0;
    os << std::setw(6) << l << std::setw(12) << lv.size() << std::setw(14) << lv.a.nnz()
       << std::setw(10) << std::fixed << std::setprecision(2) << per_row << '\n';
  }
  os << std::fixed << std::setprecision(3) << "grid complexity " << grid_complexity()
     << ", operator complexity " << operator_complexity() << '\n';
  for (const auto& w : warnings) os << "warning: " << w << '\n';
  return os.str();
}

AmgHierarchy amg_setup(const SparseCsr& a, const AmgOptions& opts) {
  require_dims(a.square(), "amg_setup: matrix must be square");
  if (a.n_rows == 0) throw DimensionError("amg_setup: empty matrix");
  if (opts.max_levels < 1) throw Error("amg_setup: max_levels must be >= 1");
  if (opts.coarse_size < 1) throw Error("amg_setup: coarse_size must be >= 1");
  if (opts.pre_sweeps < 0 || opts.post_sweeps < 0) throw Error("amg_setup: sweeps must be >= 0");
  opts.smoother.validate();

  Stopwatch sw;
  AmgHierarchy h;
  h.options = opts;
  h.levels.emplace_back();
  h.levels.back().a = a;

  while (h.n_levels() < opts.max_levels && h.levels.back().size() > opts.coarse_size) {
    AmgLevel& fine = h.levels.back();
    const StrengthGraph s = strength(fine.a, opts.strength);
    const CfSplitting cf = opts.coarsening == Coarsening::RugeStueben
                               ? rs_coarsen(s)
                               : cljp_coarsen(s, opts.seed + static_cast<std::uint64_t>(h.n_levels()));
    if (cf.n_coarse == 0 || cf.n_coarse == fine.size()) {
      h.warnings.push_back("coarsening stagnated at level " + std::to_string(h.n_levels() - 1) +
                           " (" + std::to_string(fine.size()) + " rows)");
      break;
    }
    fine.p = opts.interpolation == Interpolation::Direct ? interp_direct(fine.a, cf, s)
                                                         : interp_standard(fine.a, cf, s);
    fine.r = transpose(fine.p);
    SparseCsr coarse = galerkin_product(fine.r, fine.a, fine.p);
    fine.p_hec = hec_from_csr(fine.p);
    fine.r_hec = hec_from_csr(fine.r);
    h.levels.emplace_back();
    h.levels.back().a = std::move(coarse);
  }

  for (auto& lv : h.levels) lv.a_hec = hec_from_csr(lv.a);
  const Index last = h.n_levels() - 1;
  for (Index l = 0; l < last; ++l) h.levels[l].smoother = Smoother(h.levels[l].a, opts.smoother);

  AmgLevel& coarsest = h.levels.back();
  if (coarsest.size() <= kDenseLimit) {
    h.coarse_solver = DenseLu(coarsest.a);
  } else {
    h.warnings.push_back("coarsest level has " + std::to_string(coarsest.size()) +
                         " rows; smoothing replaces the direct solve");
    coarsest.smoother = Smoother(coarsest.a, opts.smoother);
  }
  h.setup_seconds = sw.seconds();
  return h;
}

void vcycle(const AmgHierarchy& h, std::span<const Real> b, std::span<Real> x, Index level) {
  require_dims(level >= 0 && level < h.n_levels(), "vcycle: level out of range");
  const AmgLevel& lv = h.levels[level];
  require_dims(b.size() == static_cast<std::size_t>(lv.size()) && x.size() == b.size(),
               "vcycle: size mismatch");

  if (level == h.n_levels() - 1) {
    if (h.coarse_solver.size() == lv.size()) {
      h.coarse_solver.solve(b, x);
    } else {
      lv.smoother.apply(lv.a_hec, b, x, kCoarseFallbackSweeps);
    }
    return;
  }

  lv.smoother.apply(lv.a_hec, b, x, h.options.pre_sweeps);
  Vector r(lv.size());
  residual(lv.a_hec, x, b, r);
  const Index nc = h.levels[level + 1].size();
  Vector rc(nc), ec(nc, 0.0);
  spmv(lv.r_hec, r, rc);
  vcycle(h, rc, ec, level + 1);
  spmv_axpby(1.0, lv.p_hec, ec, 1.0, x);
  lv.smoother.apply(lv.a_hec, b, x, h.options.post_sweeps);
}

SolveResult amg_solve(const AmgHierarchy& h, std::span<const Real> b, const SolverConfig& cfg) {
  require_dims(h.n_levels() > 0, "amg_solve: empty hierarchy");
  const AmgLevel& fine = h.levels.front();
  const Index n = fine.size();
  require_dims(b.size() == static_cast<std::size_t>(n), "amg_solve: b length != n");
  if (!all_finite(b)) throw Error("amg_solve: right-hand side has non-finite entries");
  cfg.validate(n);

  SolveResult out;
  SolveReport& rep = out.report;
  rep.timings.setup = h.setup_seconds;
  const Real bnorm = norm2(b);
  if (bnorm == 0.0) {
    out.x.assign(n, 0.0);
    rep.converged = true;
    return out;
  }

  Stopwatch loop;
  Vector x = cfg.initial_guess ? *cfg.initial_guess : Vector(n, 0.0);
  Vector r(n);
  auto rel_residual = [&] {
    Stopwatch s;
    residual(fine.a_hec, x, b, r);
    rep.timings.spmv += s.seconds();
    return norm2(r) / bnorm;
  };
  Real res = rel_residual();
  rep.residual_history.push_back(res);
  Index growth = 0;
  while (res > cfg.tolerance && rep.iterations < cfg.max_iterations) {
    Stopwatch s;
    vcycle(h, b, x);
    rep.timings.precond += s.seconds();
    ++rep.iterations;
    const Real next = rel_residual();
    rep.residual_history.push_back(next);
    if (!std::isfinite(next)) {
      rep.breakdown = "divergence: non-finite residual";
      res = next;
      break;
    }
    growth = next > res ? growth + 1 : 0;
    res = next;
    if (growth >= 3) {
      rep.breakdown = "divergence: residual grew over 3 consecutive cycles";
      break;
    }
  }
  rep.recursive_relative_residual = res;
  rep.final_relative_residual = res;
  rep.converged = res <= cfg.tolerance;
  rep.timings.apply = loop.seconds();
  out.x = std::move(x);
  return out;
}

AmgPreconditioner::AmgPreconditioner(const SparseCsr& a, const AmgOptions& opts)
    : h_(amg_setup(a, opts)) {
  setup_seconds_ = h_.setup_seconds;
}

void AmgPreconditioner::apply(std::span<const Real> r, std::span<Real> z) const {
  std::fill(z.begin(), z.end(), 0.0);
  vcycle(h_, r, z);
}

}  // namespace hecsolve::amg
