#include "hecsolve/krylov.hpp"

#include <cmath>
#include <limits>

#include "hecsolve/timer.hpp"
#include "hecsolve/vector_ops.hpp"

namespace hecsolve {

void SolverConfig::validate(Index n) const {
  if (!(tolerance > 0.0)) throw Error("solver: tolerance must be > 0");
  if (max_iterations < 0) throw Error("solver: max_iterations must be >= 0");
  if (restart < 1) throw Error("solver: restart must be >= 1");
  if (initial_guess && initial_guess->size() != static_cast<std::size_t>(n))
    throw DimensionError("solver: initial guess length != n");
}

namespace {

/// Operator and preconditioner applications with timing and exchange accounting.
class Context {
 public:
  Context(const LinearOperator& a, const Preconditioner& m, std::span<const Real> b,
          const SolverConfig& cfg, SolveReport& rep)
      : a_(a), m_(m), b_(b), rep_(rep) {
    require_dims(a.size() == m.size(), "solver: preconditioner size != operator size");
    require_dims(b.size() == static_cast<std::size_t>(a.size()), "solver: b length != n");
    if (!all_finite(b)) throw Error("solver: right-hand side has non-finite entries");
    cfg.validate(a.size());
    rep_.timings.setup = m.setup_seconds();
    bnorm_ = norm2(b);
  }

  Index n() const { return a_.size(); }
  Real bnorm() const { return bnorm_; }

  void spmv(std::span<const Real> x, std::span<Real> y) {
    Stopwatch sw;
    a_.apply(x, y);
    rep_.timings.spmv += sw.seconds();
    rep_.comm_volume += a_.exchange_volume();
  }

  void precond(std::span<const Real> r, std::span<Real> z) {
    Stopwatch sw;
    m_.apply(r, z);
    rep_.timings.precond += sw.seconds();
  }

  /// r = b - A x, returns ||r|| / ||b||
  Real residual(std::span<const Real> x, std::span<Real> r) {
    spmv(x, r);
    axpby_inplace(1.0, b_, -1.0, r);
    return norm2(r) / bnorm_;
  }

 private:
  const LinearOperator& a_;
  const Preconditioner& m_;
  std::span<const Real> b_;
  SolveReport& rep_;
  Real bnorm_ = 0.0;
};

Vector start_vector(const SolverConfig& cfg, Index n) {
  return cfg.initial_guess ? *cfg.initial_guess : Vector(n, 0.0);
}

void finish(Context& ctx, const SolverConfig& cfg, std::span<const Real> x, SolveReport& rep,
            const Stopwatch& loop) {
  Vector r(ctx.n());
  rep.final_relative_residual = ctx.residual(x, r);
  rep.converged = rep.final_relative_residual <= cfg.tolerance;
  rep.timings.apply = loop.seconds();
}

bool zero_rhs(const Context& ctx, SolveResult& out) {
  if (ctx.bnorm() != 0.0) return false;
  out.x.assign(ctx.n(), 0.0);
  out.report.converged = true;
  return true;
}

}  // namespace

SolveResult bicgstab(const LinearOperator& a, const Preconditioner& m, std::span<const Real> b,
                     const SolverConfig& cfg) {
  SolveResult out;
  SolveReport& rep = out.report;
  Context ctx(a, m, b, cfg, rep);
  if (zero_rhs(ctx, out)) return out;
  const Index n = ctx.n();
  const Real tol = cfg.tolerance;

  Stopwatch loop;
  Vector x = start_vector(cfg, n);
  Vector r(n), r0(n), p(n), v(n), s(n), t(n), ps(n), ss(n);
  Real res = ctx.residual(x, r);
  rep.residual_history.push_back(res);
  rep.recursive_relative_residual = res;
  if (res <= tol) {
    finish(ctx, cfg, x, rep, loop);
    out.x = std::move(x);
    return out;
  }
  copy(r, r0);

  Real rho_prev = 1.0, alpha = 1.0, omega = 1.0;
  bool fresh = true;  // first step after (re)start: p = r
  for (Index k = 1; k <= cfg.max_iterations; ++k) {
    rep.iterations = k;
    const Real rho = dot(r0, r);
    if (rho == 0.0) {
      rep.breakdown = "rho = (r0, r) vanished";
      break;
    }
    if (fresh) {
      copy(r, p);
      fresh = false;
    } else {
      const Real beta = (rho / rho_prev) * (alpha / omega);
      // p = r + beta (p - omega v)
      axpby_inplace(-omega, v, 1.0, p);
      axpby_inplace(1.0, r, beta, p);
    }
    ctx.precond(p, ps);
    ctx.spmv(ps, v);
    const Real r0v = dot(r0, v);
    if (r0v == 0.0) {
      rep.breakdown = "(r0, v) vanished";
      break;
    }
    alpha = rho / r0v;
    axpbyz(1.0, r, -alpha, v, s);
    const Real s_res = norm2(s) / ctx.bnorm();

    bool candidate = false;
    if (s_res <= tol) {
      axpby_inplace(alpha, ps, 1.0, x);
      rep.recursive_relative_residual = s_res;
      rep.residual_history.push_back(s_res);
      candidate = true;
    } else {
      ctx.precond(s, ss);
      ctx.spmv(ss, t);
      const Real tt = dot(t, t);
      omega = tt == 0.0 ? 0.0 : dot(t, s) / tt;
      axpby_inplace(alpha, ps, 1.0, x);
      axpby_inplace(omega, ss, 1.0, x);
      axpbyz(1.0, s, -omega, t, r);
      res = norm2(r) / ctx.bnorm();
      rep.recursive_relative_residual = res;
      rep.residual_history.push_back(res);
      if (res <= tol) {
        candidate = true;
      } else if (omega == 0.0) {
        rep.breakdown = "omega vanished";
        break;
      }
    }
    rho_prev = rho;
    if (candidate) {
      // confirm against the true residual; restart from it if the
      // recurrence drifted
      res = ctx.residual(x, r);
      if (res <= tol) break;
      copy(r, r0);
      fresh = true;
    }
  }
  finish(ctx, cfg, x, rep, loop);
  out.x = std::move(x);
  return out;
}

SolveResult gmres(const LinearOperator& a, const Preconditioner& m, std::span<const Real> b,
                  const SolverConfig& cfg) {
  SolveResult out;
  SolveReport& rep = out.report;
  Context ctx(a, m, b, cfg, rep);
  if (zero_rhs(ctx, out)) return out;
  const Index n = ctx.n();
  const Real tol = cfg.tolerance;
  const Index restart = cfg.restart;

  Stopwatch loop;
  Vector x = start_vector(cfg, n);
  Vector r(n), w(n), z(n);
  Real res = ctx.residual(x, r);
  rep.residual_history.push_back(res);
  rep.recursive_relative_residual = res;

  std::vector<Vector> basis(restart + 1, Vector(n));
  std::vector<Vector> h(restart + 1, Vector(restart, 0.0));  // h[row][col]
  Vector cs(restart), sn(restart), g(restart + 1), y(restart);

  while (res > tol && rep.iterations < cfg.max_iterations) {
    const Real cycle_start = res;
    const Real beta = res * ctx.bnorm();
    for (Index i = 0; i < n; ++i) basis[0][i] = r[i] / beta;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;

    Index used = 0;
    for (Index j = 0; j < restart && rep.iterations < cfg.max_iterations; ++j) {
      ctx.precond(basis[j], z);
      ctx.spmv(z, w);
      for (Index i = 0; i <= j; ++i) {
        h[i][j] = dot(w, basis[i]);
        axpby_inplace(-h[i][j], basis[i], 1.0, w);
      }
      const Real wnorm = norm2(w);
      h[j + 1][j] = wnorm;
      for (Index i = 0; i < j; ++i) {
        const Real tmp = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
        h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
        h[i][j] = tmp;
      }
      const Real denom = std::hypot(h[j][j], h[j + 1][j]);
      if (denom == 0.0) {
        rep.breakdown = "singular Hessenberg matrix";
        break;
      }
      cs[j] = h[j][j] / denom;
      sn[j] = h[j + 1][j] / denom;
      h[j][j] = denom;
      h[j + 1][j] = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];

      ++rep.iterations;
      used = j + 1;
      rep.recursive_relative_residual = std::abs(g[j + 1]) / ctx.bnorm();
      rep.residual_history.push_back(rep.recursive_relative_residual);
      if (rep.recursive_relative_residual <= tol || wnorm == 0.0) break;
      for (Index i = 0; i < n; ++i) basis[j + 1][i] = w[i] / wnorm;
    }
    if (used == 0) break;

    for (Index i = used - 1; i >= 0; --i) {
      Real s = g[i];
      for (Index k = i + 1; k < used; ++k) s -= h[i][k] * y[k];
      y[i] = s / h[i][i];
    }
    std::fill(w.begin(), w.end(), 0.0);
    for (Index i = 0; i < used; ++i) axpby_inplace(y[i], basis[i], 1.0, w);
    ctx.precond(w, z);
    axpby_inplace(1.0, z, 1.0, x);

    res = ctx.residual(x, r);
    if (rep.breakdown) break;
    if (res > tol && res >= cycle_start) {
      rep.breakdown = "stagnation: no residual decrease over a restart cycle";
      break;
    }
  }
  finish(ctx, cfg, x, rep, loop);
  out.x = std::move(x);
  return out;
}

SolveResult cg(const LinearOperator& a, const Preconditioner& m, std::span<const Real> b,
               const SolverConfig& cfg) {
  SolveResult out;
  SolveReport& rep = out.report;
  Context ctx(a, m, b, cfg, rep);
  if (zero_rhs(ctx, out)) return out;
  const Index n = ctx.n();
  const Real tol = cfg.tolerance;

  Stopwatch loop;
  Vector x = start_vector(cfg, n);
  Vector r(n), z(n), p(n), q(n);
  Real res = ctx.residual(x, r);
  rep.residual_history.push_back(res);
  rep.recursive_relative_residual = res;
  if (res > tol) {
    ctx.precond(r, z);
    copy(z, p);
    Real rz = dot(r, z);
    for (Index k = 1; k <= cfg.max_iterations; ++k) {
      rep.iterations = k;
      ctx.spmv(p, q);
      const Real pq = dot(p, q);
      if (!(pq > 0.0)) {
        rep.breakdown = "indefinite: p^T A p <= 0";
        break;
      }
      const Real alpha = rz / pq;
      axpby_inplace(alpha, p, 1.0, x);
      axpby_inplace(-alpha, q, 1.0, r);
      res = norm2(r) / ctx.bnorm();
      rep.recursive_relative_residual = res;
      rep.residual_history.push_back(res);
      if (res <= tol) {
        res = ctx.residual(x, r);
        if (res <= tol) break;
        ctx.precond(r, z);
        copy(z, p);
        rz = dot(r, z);
        continue;
      }
      ctx.precond(r, z);
      const Real rz_new = dot(r, z);
      axpby_inplace(1.0, z, rz_new / rz, p);
      rz = rz_new;
    }
  }
  finish(ctx, cfg, x, rep, loop);
  out.x = std::move(x);
  return out;
}

}  // namespace hecsolve
