#pragma once

#include "hecsolve/csr.hpp"

namespace hecsolve {

/// 7-point finite-difference Laplacian on an nx*ny*nz grid with Dirichlet
/// truncation: diagonal 6, off-diagonals -1. Unknowns are numbered with x
/// fastest, i.e. row = x + nx*(y + ny*z).
SparseCsr poisson3d(Index nx, Index ny, Index nz);

/// Expected nonzero count of poisson3d without building it.
Offset poisson3d_nnz(Index nx, Index ny, Index nz);

/// 5-point 2D Laplacian (diagonal 4), same numbering with z dropped.
SparseCsr poisson2d(Index nx, Index ny);

/// 1D chain Laplacian tridiag(-1, 2, -1).
SparseCsr laplacian1d(Index n);

}  // namespace hecsolve
