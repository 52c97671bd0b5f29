#include <gtest/gtest.h>

#include <cstring>
#include <sstream>

#include "hecsolve/csr.hpp"
#include "hecsolve/hec.hpp"
#include "hecsolve/matrix_market.hpp"
#include "hecsolve/parallel.hpp"
#include "hecsolve/poisson.hpp"
#include "hecsolve/vector_ops.hpp"
#include "support.hpp"

using namespace hecsolve;
using namespace testing_support;

namespace {

bool bitwise_equal(const Vector& a, const Vector& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(Real)) == 0;
}

}  // namespace

TEST(Triplets, SortsAndSumsDuplicates) {
  const SparseCsr a = csr_from_triplets(3, 4, {{2, 1, 1.0}, {0, 3, 2.0}, {0, 0, 1.0}, {2, 1, 0.5}, {1, 2, 0.0}});
  EXPECT_TRUE(a.is_canonical());
  EXPECT_EQ(a.nnz(), 4);
  EXPECT_EQ(a.at(2, 1), 1.5);
  EXPECT_EQ(a.at(0, 3), 2.0);
  EXPECT_GE(a.find(1, 2), 0);  // explicit zero kept
  const SparseCsr dropped = csr_from_triplets(3, 4, {{1, 2, 0.0}, {0, 0, 1.0}}, true);
  EXPECT_EQ(dropped.nnz(), 1);
  EXPECT_THROW(csr_from_triplets(2, 2, {{2, 0, 1.0}}), FormatError);
}

TEST(Csr, ValidateRejectsUnsortedAndOutOfRange) {
  SparseCsr a(2, 2);
  a.row_ptr = {0, 2, 2};
  a.col_idx = {1, 0};
  a.values = {1.0, 2.0};
  EXPECT_THROW(a.validate(), FormatError);
  a.col_idx = {0, 2};
  EXPECT_THROW(a.validate(), FormatError);
  a.col_idx = {0, 0};
  EXPECT_THROW(a.validate(), FormatError);  // duplicate
  a.col_idx = {0, 1};
  EXPECT_NO_THROW(a.validate());
}

TEST(Csr, TransposeAndMultiplyMatchDense) {
  std::mt19937_64 rng(11);
  const SparseCsr a = random_sparse(17, 9, 0.3, rng);
  const SparseCsr b = random_sparse(9, 13, 0.3, rng);
  EXPECT_TRUE((to_dense(transpose(a)) - to_dense(a).transpose()).norm() == 0.0);
  const SparseCsr c = multiply(a, b);
  EXPECT_TRUE(c.is_canonical());
  EXPECT_LT((to_dense(c) - to_dense(a) * to_dense(b)).norm(), 1e-13);
}

TEST(Csr, GalerkinProductMatchesDense) {
  std::mt19937_64 rng(12);
  const SparseCsr a = random_diag_dominant(30, 0.2, rng, true);
  const SparseCsr p = random_sparse(30, 8, 0.3, rng);
  const SparseCsr g = galerkin_product(transpose(p), a, p);
  const Eigen::MatrixXd ref = to_dense(p).transpose() * to_dense(a) * to_dense(p);
  EXPECT_LT((to_dense(g) - ref).norm(), 1e-12 * ref.norm());
}

TEST(Csr, PrincipalSubmatrixFollowsIndexOrder) {
  const SparseCsr a = poisson2d(4, 4);
  const std::vector<Index> rows{5, 1, 6};
  const SparseCsr s = principal_submatrix(a, rows);
  for (Index r = 0; r < 3; ++r)
    for (Index c = 0; c < 3; ++c) EXPECT_EQ(s.at(r, c), a.at(rows[r], rows[c]));
}

TEST(Csr, AdjacencyGraphIsSymmetrizedWithoutLoops) {
  const SparseCsr a = csr_from_triplets(3, 3, {{0, 0, 1.0}, {0, 2, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}});
  const Graph g = adjacency_graph(a);
  ASSERT_EQ(g.degree(0), 1);
  ASSERT_EQ(g.degree(2), 1);
  EXPECT_EQ(g.neighbors(2)[0], 0);
  EXPECT_EQ(g.degree(1), 0);
}

TEST(Hec, RoundTripPreservesCanonicalMatrix) {
  std::mt19937_64 rng(3);
  for (Index cap : {0, 1, 3, 20}) {
    const SparseCsr a = random_sparse(70, 50, 0.15, rng);
    const HecMatrix h = hec_from_csr(a, cap);
    EXPECT_EQ(h.nnz(), a.nnz());
    EXPECT_EQ(csr_from_hec(h), a);
  }
}

TEST(Hec, LayoutIsColumnMajorWithSentinelPadding) {
  // row 0: 3 entries, row 1: 1 entry, row 2: empty
  const SparseCsr a = csr_from_triplets(3, 4, {{0, 0, 1.0}, {0, 2, 2.0}, {0, 3, 3.0}, {1, 1, 4.0}});
  const HecMatrix h = hec_from_csr(a, 2, 4);
  EXPECT_EQ(h.ell_width, 2);
  EXPECT_EQ(h.ell_stride, 4);
  EXPECT_EQ(h.ell_col[h.slot(0, 1)], 2);
  EXPECT_EQ(h.ell_col[1 * 4 + 0], 2);  // slot(row, j) = j * stride + row
  EXPECT_EQ(h.ell_col[h.slot(1, 1)], h.sentinel());
  EXPECT_EQ(h.ell_val[h.slot(1, 1)], 0.0);
  EXPECT_EQ(h.ell_col[h.slot(2, 0)], h.sentinel());
  EXPECT_EQ(h.csr_rest.nnz(), 1);
  EXPECT_EQ(h.csr_rest.row_cols(0)[0], 3);
}

TEST(Hec, StrideIsMultipleOfUnit) {
  const SparseCsr a = laplacian1d(33);
  EXPECT_EQ(hec_from_csr(a).ell_stride, 64);
  EXPECT_EQ(hec_from_csr(a, 20, 11).ell_stride, 33);
  EXPECT_EQ(hec_from_csr(laplacian1d(1)).ell_stride, 32);
  EXPECT_THROW(hec_from_csr(a, 20, 0), Error);
}

TEST(Hec, RejectsNonCanonicalInput) {
  SparseCsr a(1, 2);
  a.row_ptr = {0, 2};
  a.col_idx = {1, 0};
  a.values = {1.0, 1.0};
  EXPECT_THROW(hec_from_csr(a), FormatError);
}

TEST(Spmv, HecIsBitwiseEqualToCsr) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 1 + static_cast<Index>(rng() % 200);
    const SparseCsr a = random_sparse(n, n, 0.1, rng);
    const Vector x = random_vector(n, rng);
    for (Index cap : {0, 2, 20}) {
      EXPECT_TRUE(bitwise_equal(spmv(hec_from_csr(a, cap), x), spmv_csr(a, x)));
    }
  }
}

TEST(Spmv, MatchesDenseOracle) {
  std::mt19937_64 rng(6);
  const SparseCsr a = random_sparse(120, 80, 0.2, rng);
  const Vector x = random_vector(80, rng);
  const Vector ref = from_eigen(to_dense(a) * to_eigen(x));
  EXPECT_LT(rel_diff(spmv(hec_from_csr(a), x), ref), 1e-13);
}

TEST(Spmv, LongRowsSpillIntoRemainder) {
  std::vector<Triplet> t;
  for (Index j = 0; j < 60; ++j) t.push_back({0, j, 1.0 + j});
  t.push_back({1, 5, 2.0});
  const SparseCsr a = csr_from_triplets(2, 60, t);
  const HecMatrix h = hec_from_csr(a);
  EXPECT_EQ(h.csr_rest.nnz(), 40);
  Vector x(60, 1.0);
  const Vector y = spmv(h, x);
  EXPECT_EQ(y[0], 60.0 * 61.0 / 2.0);
  EXPECT_EQ(y[1], 2.0);
}

TEST(Spmv, EmptyAndZeroSizedMatrices) {
  const SparseCsr empty_rows(5, 5);
  const Vector y = spmv(hec_from_csr(empty_rows), Vector(5, 1.0));
  EXPECT_EQ(y, Vector(5, 0.0));
  const SparseCsr zero(0, 0);
  EXPECT_TRUE(spmv(hec_from_csr(zero), Vector{}).empty());
}

TEST(Spmv, DimensionMismatchThrows) {
  const HecMatrix h = hec_from_csr(laplacian1d(4));
  Vector y(4);
  EXPECT_THROW(spmv(h, Vector(3, 1.0), y), DimensionError);
}

TEST(Spmv, WorkerCountDoesNotChangeResult) {
  const SparseCsr a = poisson3d(12, 11, 10);
  std::mt19937_64 rng(8);
  const Vector x = random_vector(a.n_cols, rng);
  const HecMatrix h = hec_from_csr(a);
  Vector ref;
  {
    WorkerScope one(1);
    ref = spmv(h, x);
  }
  for (int w : {2, 3, 4}) {
    WorkerScope scope(w);
    EXPECT_TRUE(bitwise_equal(spmv(h, x), ref)) << w << " workers";
  }
}

TEST(Spmv, ResidualAndAxpby) {
  const SparseCsr a = poisson2d(5, 4);
  const HecMatrix h = hec_from_csr(a);
  std::mt19937_64 rng(9);
  const Vector x = random_vector(a.n_rows, rng);
  const Vector b = random_vector(a.n_rows, rng);
  Vector r(a.n_rows), r_csr(a.n_rows);
  residual(h, x, b, r);
  residual_csr(a, x, b, r_csr);
  const Vector ax = spmv_csr(a, x);
  for (Index i = 0; i < a.n_rows; ++i) EXPECT_DOUBLE_EQ(r[i], b[i] - ax[i]);
  EXPECT_EQ(r, r_csr);
  Vector y = b;
  spmv_axpby(2.0, h, x, -1.0, y);
  for (Index i = 0; i < a.n_rows; ++i) EXPECT_NEAR(y[i], 2.0 * ax[i] - b[i], 1e-14);
}

TEST(VectorOps, DotIsIndependentOfWorkerCount) {
  std::mt19937_64 rng(10);
  const Vector x = random_vector(100000, rng);
  const Vector y = random_vector(100000, rng);
  Real ref;
  {
    WorkerScope one(1);
    ref = dot(x, y);
  }
  for (int w : {2, 4, 7}) {
    WorkerScope scope(w);
    EXPECT_EQ(dot(x, y), ref);
  }
  long double exact = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) exact += static_cast<long double>(x[i]) * y[i];
  EXPECT_NEAR(ref, static_cast<double>(exact), 1e-10);
}

TEST(VectorOps, Kernels) {
  Vector x{1.0, 2.0, 3.0}, y{1.0, 1.0, 1.0};
  axpby_inplace(2.0, x, 3.0, y);
  EXPECT_EQ(y, (Vector{5.0, 7.0, 9.0}));
  EXPECT_EQ(axpbyz(1.0, x, -1.0, x), Vector(3, 0.0));
  EXPECT_DOUBLE_EQ(norm2(Vector{3.0, 4.0}), 5.0);
  scale(0.5, x);
  EXPECT_EQ(x, (Vector{0.5, 1.0, 1.5}));
  EXPECT_FALSE(all_finite(Vector{1.0, std::nan("")}));
  EXPECT_THROW(dot(Vector(2), Vector(3)), DimensionError);
}

TEST(Parallel, ExceptionsPropagateOutOfWorkers) {
  WorkerScope scope(4);
  EXPECT_THROW(parallel_for(1000,
                            [](std::ptrdiff_t b, std::ptrdiff_t) {
                              if (b > 0) throw Error("boom");
                            }),
               Error);
  EXPECT_THROW(parallel_tasks(8, [](std::ptrdiff_t i) {
                 if (i == 5) throw Error("boom");
               }),
               Error);
  EXPECT_THROW(set_num_workers(0), Error);
}

TEST(Poisson, CountsMatchClosedForm) {
  EXPECT_EQ(poisson3d(50, 50, 50).nnz(), 860000);
  EXPECT_EQ(poisson3d_nnz(150, 150, 150), 23490000);
  const SparseCsr a = poisson3d(3, 4, 5);
  EXPECT_EQ(a.nnz(), poisson3d_nnz(3, 4, 5));
  EXPECT_TRUE(a.is_canonical());
  EXPECT_EQ(a, transpose(a));
}

TEST(Poisson, StencilAndNumbering) {
  const Index nx = 4, ny = 3, nz = 2;
  const SparseCsr a = poisson3d(nx, ny, nz);
  auto id = [&](Index x, Index y, Index z) { return x + nx * (y + ny * z); };
  const Index c = id(1, 1, 0);
  EXPECT_EQ(a.at(c, c), 6.0);
  EXPECT_EQ(a.at(c, id(0, 1, 0)), -1.0);
  EXPECT_EQ(a.at(c, id(1, 2, 0)), -1.0);
  EXPECT_EQ(a.at(c, id(1, 1, 1)), -1.0);
  EXPECT_EQ(a.at(c, id(2, 2, 0)), 0.0);
  EXPECT_EQ(a.row_nnz(id(0, 0, 0)), 4);
}

TEST(Poisson, DegenerateGrids) {
  EXPECT_EQ(poisson3d(1, 1, 1).nnz(), 1);
  EXPECT_EQ(poisson3d(5, 1, 1).nnz(), 13);
  EXPECT_THROW(poisson3d(0, 3, 3), DimensionError);
  EXPECT_THROW(poisson3d(2000, 2000, 2000), DimensionError);
  EXPECT_EQ(laplacian1d(4).at(1, 1), 2.0);
}

TEST(MatrixMarket, RoundTripIsExact) {
  std::mt19937_64 rng(21);
  const SparseCsr a = random_sparse(23, 17, 0.2, rng);
  std::stringstream ss;
  write_matrix_market(ss, a);
  EXPECT_EQ(read_matrix_market(ss), a);
}

TEST(MatrixMarket, SymmetricIsExpanded) {
  std::istringstream in(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "% comment\n"
      "3 3 4\n"
      "1 1 2.0\n2 1 -1.0\n2 2 2.0\n3 3 2.0\n");
  const SparseCsr a = read_matrix_market(in);
  EXPECT_EQ(a.nnz(), 5);
  EXPECT_EQ(a.at(0, 1), -1.0);
  EXPECT_EQ(a.at(1, 0), -1.0);
}

TEST(MatrixMarket, IntegerFieldAndDuplicates) {
  std::istringstream in(
      "%%MatrixMarket matrix coordinate integer general\n"
      "2 2 3\n1 1 1\n1 1 2\n2 2 5\n");
  const SparseCsr a = read_matrix_market(in);
  EXPECT_EQ(a.at(0, 0), 3.0);
  EXPECT_EQ(a.nnz(), 2);
}

TEST(MatrixMarket, MalformedInputsThrow) {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return read_matrix_market(in);
  };
  EXPECT_THROW(parse(""), FormatError);
  EXPECT_THROW(parse("%%MatrixMarket matrix array real general\n2 2\n"), FormatError);
  EXPECT_THROW(parse("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n"), FormatError);
  EXPECT_THROW(parse("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n"), FormatError);
  EXPECT_THROW(parse("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n"), FormatError);
  EXPECT_THROW(read_matrix_market("/nonexistent/file.mtx"), Error);
}
