#include "hecsolve/poisson.hpp"

#include <array>
#include <limits>

namespace hecsolve {

SparseCsr poisson3d(Index nx, Index ny, Index nz) {
  if (nx < 1 || ny < 1 || nz < 1) throw DimensionError("poisson3d: every dimension must be >= 1");
  const Offset total = static_cast<Offset>(nx) * ny * nz;
  if (total > static_cast<Offset>(std::numeric_limits<Index>::max()))
    throw DimensionError("poisson3d: grid too large for 32-bit row indices");
  const auto n = static_cast<Index>(total);
  const Index plane = nx * ny;

  SparseCsr a(n, n);
  const Offset nnz = poisson3d_nnz(nx, ny, nz);
  a.col_idx.resize(nnz);
  a.values.resize(nnz);
  Offset k = 0;
  Index row = 0;
  for (Index z = 0; z < nz; ++z) {
    for (Index y = 0; y < ny; ++y) {
      for (Index x = 0; x < nx; ++x, ++row) {
        // neighbours in increasing column order
        const std::array<std::pair<bool, Index>, 7> stencil{{
            {z > 0, row - plane},
            {y > 0, row - nx},
            {x > 0, row - 1},
            {true, row},
            {x + 1 < nx, row + 1},
            {y + 1 < ny, row + nx},
            {z + 1 < nz, row + plane},
        }};
        for (const auto& [present, col] : stencil) {
          if (!present) continue;
          a.col_idx[k] = col;
          a.values[k] = col == row ? 6.0 : -1.0;
          ++k;
        }
        a.row_ptr[row + 1] = k;
      }
    }
  }
  return a;
}

Offset poisson3d_nnz(Index nx, Index ny, Index nz) {
  const Offset n = static_cast<Offset>(nx) * ny * nz;
  return 7 * n - 2 * (static_cast<Offset>(ny) * nz + static_cast<Offset>(nx) * nz +
                      static_cast<Offset>(nx) * ny);
}

SparseCsr poisson2d(Index nx, Index ny) {
  if (nx < 1 || ny < 1) throw DimensionError("poisson2d: every dimension must be >= 1");
  const Index n = nx * ny;
  SparseCsr a(n, n);
  Index row = 0;
  for (Index y = 0; y < ny; ++y) {
    for (Index x = 0; x < nx; ++x, ++row) {
      const std::array<std::pair<bool, Index>, 5> stencil{{
          {y > 0, row - nx},
          {x > 0, row - 1},
          {true, row},
          {x + 1 < nx, row + 1},
          {y + 1 < ny, row + nx},
      }};
      for (const auto& [present, col] : stencil) {
        if (!present) continue;
        a.col_idx.push_back(col);
        a.values.push_back(col == row ? 4.0 : -1.0);
      }
      a.row_ptr[row + 1] = static_cast<Offset>(a.col_idx.size());
    }
  }
  return a;
}

SparseCsr laplacian1d(Index n) {
  if (n < 1) throw DimensionError("laplacian1d: n must be >= 1");
  SparseCsr a(n, n);
  for (Index i = 0; i < n; ++i) {
    if (i > 0) {
      a.col_idx.push_back(i - 1);
      a.values.push_back(-1.0);
    }
    a.col_idx.push_back(i);
    a.values.push_back(2.0);
    if (i + 1 < n) {
      a.col_idx.push_back(i + 1);
      a.values.push_back(-1.0);
    }
    a.row_ptr[i + 1] = static_cast<Offset>(a.col_idx.size());
  }
  return a;
}

}  // namespace hecsolve
