#pragma once

// Shared helpers for the test suites: dense reference conversions via Eigen,
// seeded random generators and brute-force oracles.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "hecsolve/csr.hpp"

namespace testing_support {

using hecsolve::Index;
using hecsolve::Offset;
using hecsolve::Real;
using hecsolve::SparseCsr;
using hecsolve::Triplet;
using hecsolve::Vector;

inline Eigen::MatrixXd to_dense(const SparseCsr& a) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(a.n_rows, a.n_cols);
  for (Index i = 0; i < a.n_rows; ++i)
    for (Offset k = a.row_begin(i); k < a.row_end(i); ++k) d(i, a.col_idx[k]) += a.values[k];
  return d;
}

inline Eigen::VectorXd to_eigen(const Vector& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline Vector from_eigen(const Eigen::VectorXd& v) { return Vector(v.data(), v.data() + v.size()); }

inline Real max_abs_diff(const Vector& a, const Vector& b) {
  Real m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline Real max_abs(const Vector& a) {
  Real m = 0.0;
  for (Real v : a) m = std::max(m, std::abs(v));
  return m;
}

/// Relative max-norm difference, scaled by the reference.
inline Real rel_diff(const Vector& x, const Vector& ref) {
  const Real s = max_abs(ref);
  return s > 0.0 ? max_abs_diff(x, ref) / s : max_abs_diff(x, ref);
}

inline Vector random_vector(Index n, std::mt19937_64& rng, Real lo = -1.0, Real hi = 1.0) {
  std::uniform_real_distribution<Real> d(lo, hi);
  Vector v(n);
  for (Real& x : v) x = d(rng);
  return v;
}

/// Random sparse matrix; every entry present with probability `density`.
inline SparseCsr random_sparse(Index rows, Index cols, double density, std::mt19937_64& rng) {
  std::uniform_real_distribution<Real> val(-1.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<Triplet> t;
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      if (coin(rng) < density) t.push_back({i, j, val(rng)});
  return hecsolve::csr_from_triplets(rows, cols, std::move(t));
}

/// Random square matrix with a dominant diagonal (|a_ii| > sum_j |a_ij|),
/// optionally symmetric positive definite.
inline SparseCsr random_diag_dominant(Index n, double density, std::mt19937_64& rng,
                                      bool symmetric = false, Real margin = 1.0) {
  std::uniform_real_distribution<Real> val(-1.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<Triplet> t;
  Vector row_sum(n, 0.0);
  for (Index i = 0; i < n; ++i) {
    for (Index j = symmetric ? i + 1 : 0; j < n; ++j) {
      if (j == i || coin(rng) >= density) continue;
      const Real v = val(rng);
      t.push_back({i, j, v});
      row_sum[i] += std::abs(v);
      if (symmetric) {
        t.push_back({j, i, v});
        row_sum[j] += std::abs(v);
      }
    }
  }
  for (Index i = 0; i < n; ++i) t.push_back({i, i, row_sum[i] + margin});
  return hecsolve::csr_from_triplets(n, n, std::move(t));
}

/// ILU(k) fill level of every position from the fill-path characterization:
/// (i, j) has level L iff the shortest path i -> j in the graph of A whose
/// intermediate vertices are all smaller than min(i, j) has L + 1 edges.
/// Diagonal positions and original entries have level 0. Returns
/// max() for positions never filled.
inline std::vector<std::vector<Index>> fill_path_levels(const SparseCsr& a) {
  const Index n = a.n_rows;
  const Index inf = std::numeric_limits<Index>::max();
  std::vector<std::vector<Index>> level(n, std::vector<Index>(n, inf));
  std::vector<Index> dist(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j || a.find(i, j) >= 0) {
        level[i][j] = 0;
        continue;
      }
      const Index bound = std::min(i, j);
      // BFS from i over vertices < bound
      std::fill(dist.begin(), dist.end(), inf);
      std::vector<Index> queue{i};
      dist[i] = 0;
      Index best = inf;
      for (std::size_t q = 0; q < queue.size(); ++q) {
        const Index u = queue[q];
        for (Index v : a.row_cols(u)) {
          if (v == j) best = std::min(best, dist[u] + 1);
          if (v < bound && dist[v] == inf) {
            dist[v] = dist[u] + 1;
            queue.push_back(v);
          }
        }
      }
      if (best != inf) level[i][j] = best - 1;
    }
  }
  return level;
}

/// Longest-path depth of every row in the dependency DAG of a triangular
/// pattern, by relaxation to a fixed point.
inline std::vector<Index> dag_depths(const SparseCsr& tri, bool lower) {
  std::vector<Index> depth(tri.n_rows, 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (Index i = 0; i < tri.n_rows; ++i) {
      for (Index j : tri.row_cols(i)) {
        if ((lower && j < i) || (!lower && j > i)) {
          if (depth[j] + 1 > depth[i]) {
            depth[i] = depth[j] + 1;
            changed = true;
          }
        }
      }
    }
  }
  return depth;
}

/// Pattern as a set of (row, col) pairs.
inline std::set<std::pair<Index, Index>> pattern_of(const SparseCsr& a) {
  std::set<std::pair<Index, Index>> s;
  for (Index i = 0; i < a.n_rows; ++i)
    for (Index j : a.row_cols(i)) s.emplace(i, j);
  return s;
}

/// 3D Laplacian with zero row sums (Neumann boundaries): diagonal equals
/// the number of grid neighbours.
inline SparseCsr neumann_poisson3d(Index nx, Index ny, Index nz) {
  std::vector<Triplet> t;
  auto id = [&](Index x, Index y, Index z) { return x + nx * (y + ny * z); };
  for (Index z = 0; z < nz; ++z)
    for (Index y = 0; y < ny; ++y)
      for (Index x = 0; x < nx; ++x) {
        const Index i = id(x, y, z);
        Real deg = 0.0;
        auto link = [&](Index xx, Index yy, Index zz) {
          if (xx < 0 || yy < 0 || zz < 0 || xx >= nx || yy >= ny || zz >= nz) return;
          t.push_back({i, id(xx, yy, zz), -1.0});
          deg += 1.0;
        };
        link(x - 1, y, z);
        link(x + 1, y, z);
        link(x, y - 1, z);
        link(x, y + 1, z);
        link(x, y, z - 1);
        link(x, y, z + 1);
        t.push_back({i, i, deg});
      }
  return hecsolve::csr_from_triplets(nx * ny * nz, nx * ny * nz, std::move(t));
}

}  // namespace testing_support
