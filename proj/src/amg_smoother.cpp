#include <cmath>
#include <random>
#include <string>

#include "hecsolve/amg.hpp"
#include "hecsolve/ilu.hpp"
#include "hecsolve/parallel.hpp"
#include "hecsolve/vector_ops.hpp"

namespace hecsolve::amg {

Real SmootherConfig::weight() const {
  if (omega) return *omega;
  return kind == SmootherKind::WeightedJacobi ? 0.8 : 2.0 / 3.0;
}

void SmootherConfig::validate() const {
  if (sweeps < 0) throw Error("smoother: sweeps must be >= 0");
  if (omega && !(*omega > 0.0 && *omega < 2.0)) throw Error("smoother: omega must lie in (0, 2)");
  if (chebyshev_degree < 1) throw Error("smoother: chebyshev degree must be >= 1");
  if (!(chebyshev_ratio > 1.0)) throw Error("smoother: chebyshev ratio must be > 1");
  if (power_iterations < 1) throw Error("smoother: power iterations must be >= 1");
}

std::string to_string(SmootherKind k) {
  switch (k) {
    case SmootherKind::DampedJacobi: return "djacobi";
    case SmootherKind::WeightedJacobi: return "wjacobi";
    case SmootherKind::Chebyshev: return "chebyshev";
    case SmootherKind::GaussSeidel: return "gs";
  }
  return "?";
}

SmootherKind smoother_from_string(const std::string& s) {
  if (s == "djacobi") return SmootherKind::DampedJacobi;
  if (s == "wjacobi") return SmootherKind::WeightedJacobi;
  if (s == "chebyshev") return SmootherKind::Chebyshev;
  if (s == "gs") return SmootherKind::GaussSeidel;
  throw Error("unknown smoother '" + s + "' (djacobi, wjacobi, chebyshev, gs)");
}

namespace {

Vector inverse_diagonal(const SparseCsr& a) {
  Vector d = diagonal(a);
  for (Index i = 0; i < a.n_rows; ++i) {
    if (d[i] == 0.0) throw ZeroPivotError("smoother: zero diagonal in row " + std::to_string(i), i);
    d[i] = 1.0 / d[i];
  }
  return d;
}

/// D + strict lower part, diagonal stored last in each row.
SparseCsr lower_with_diagonal(const SparseCsr& a) {
  SparseCsr l(a.n_rows, a.n_cols);
  for (Index i = 0; i < a.n_rows; ++i) {
    Real diag = 0.0;
    for (Offset k = a.row_begin(i); k < a.row_end(i); ++k) {
      const Index j = a.col_idx[k];
      if (j < i) {
        l.col_idx.push_back(j);
        l.values.push_back(a.values[k]);
      } else if (j == i) {
        diag = a.values[k];
      }
    }
    l.col_idx.push_back(i);
    l.values.push_back(diag);
    l.row_ptr[i + 1] = static_cast<Offset>(l.col_idx.size());
  }
  return l;
}

/// x += scale * D^{-1} r, elementwise.
void jacobi_update(std::span<const Real> inv_diag, Real scale, std::span<const Real> r,
                   std::span<Real> x) {
  parallel_for(static_cast<std::ptrdiff_t>(x.size()), [&](std::ptrdiff_t b, std::ptrdiff_t e) {
    for (auto i = b; i < e; ++i) x[i] += scale * inv_diag[i] * r[i];
  });
}

Real power_iteration(const SparseCsr& a, std::span<const Real> inv_diag, Index iterations) {
  const Index n = a.n_rows;
  if (n == 0) return 0.0;
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<Real> dist(0.5, 1.5);
  Vector v(n), w(n);
  for (Real& vi : v) vi = dist(rng);
  scale(1.0 / norm2(v), v);
  Real lambda = 0.0;
  for (Index it = 0; it < iterations; ++it) {
    spmv_csr(a, v, w);
    for (Index i = 0; i < n; ++i) w[i] *= inv_diag[i];
    lambda = norm2(w);
    if (lambda == 0.0) break;
    for (Index i = 0; i < n; ++i) v[i] = w[i] / lambda;
  }
  return lambda;
}

}  // namespace

Real estimate_lambda_max(const SparseCsr& a, Index iterations) {
  require_dims(a.square(), "estimate_lambda_max: matrix must be square");
  const Vector inv_diag = inverse_diagonal(a);
  return power_iteration(a, inv_diag, iterations);
}

Smoother::Smoother(const SparseCsr& a, const SmootherConfig& cfg) : cfg_(cfg) {
  require_dims(a.square(), "smoother: matrix must be square");
  cfg_.validate();
  inv_diag_ = inverse_diagonal(a);
  if (cfg_.kind == SmootherKind::Chebyshev)
    lambda_max_ = power_iteration(a, inv_diag_, cfg_.power_iterations);
  if (cfg_.kind == SmootherKind::GaussSeidel) {
    lower_ = lower_with_diagonal(a);
    lower_schedule_ = build_level_schedule(lower_, Triangle::Lower);
  }
}

void Smoother::apply(const HecMatrix& a, std::span<const Real> b, std::span<Real> x,
                     std::optional<Index> sweeps) const {
  const Index n = a.n_rows;
  require_dims(static_cast<Index>(inv_diag_.size()) == n && b.size() == x.size() &&
                   x.size() == static_cast<std::size_t>(n),
               "smoother: size mismatch");
  const Index count = sweeps.value_or(cfg_.sweeps);
  Vector r(n);

  switch (cfg_.kind) {
    case SmootherKind::DampedJacobi:
    case SmootherKind::WeightedJacobi: {
      const Real w = cfg_.weight();
      for (Index s = 0; s < count; ++s) {
        residual(a, x, b, r);
        jacobi_update(inv_diag_, w, r, x);
      }
      break;
    }
    case SmootherKind::GaussSeidel: {
      Vector e(n);
      for (Index s = 0; s < count; ++s) {
        residual(a, x, b, r);
        lower_solve(lower_, lower_schedule_, r, e);
        axpby_inplace(1.0, e, 1.0, x);
      }
      break;
    }
    case SmootherKind::Chebyshev: {
      if (lambda_max_ == 0.0) break;
      const Real upper = cfg_.chebyshev_safety * lambda_max_;
      const Real lower = upper / cfg_.chebyshev_ratio;
      const Real theta = 0.5 * (upper + lower);
      const Real delta = 0.5 * (upper - lower);
      const Real sigma = theta / delta;
      Vector d(n);
      for (Index s = 0; s < count; ++s) {
        Real rho_old = 1.0 / sigma;
        residual(a, x, b, r);
        for (Index i = 0; i < n; ++i) d[i] = inv_diag_[i] * r[i] / theta;
        axpby_inplace(1.0, d, 1.0, x);
        for (Index k = 1; k < cfg_.chebyshev_degree; ++k) {
          const Real rho = 1.0 / (2.0 * sigma - rho_old);
          residual(a, x, b, r);
          const Real c1 = rho * rho_old;
          const Real c2 = 2.0 * rho / delta;
          for (Index i = 0; i < n; ++i) d[i] = c1 * d[i] + c2 * inv_diag_[i] * r[i];
          axpby_inplace(1.0, d, 1.0, x);
          rho_old = rho;
        }
      }
      break;
    }
  }
}

void smooth(const SparseCsr& a, std::span<Real> x, std::span<const Real> b,
            const SmootherConfig& cfg) {
  const Smoother sm(a, cfg);
  sm.apply(hec_from_csr(a), b, x);
}

}  // namespace hecsolve::amg
