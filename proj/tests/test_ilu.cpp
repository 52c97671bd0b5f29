#include <gtest/gtest.h>

#include <cstring>

#include "hecsolve/ilu.hpp"
#include "hecsolve/level_schedule.hpp"
#include "hecsolve/parallel.hpp"
#include "hecsolve/poisson.hpp"
#include "hecsolve/preconditioner.hpp"
#include "hecsolve/ras.hpp"
#include "hecsolve/vector_ops.hpp"
#include "support.hpp"

using namespace hecsolve;
using namespace testing_support;

namespace {

/// Random sparse matrix with a full, dominant diagonal.
SparseCsr random_with_diagonal(Index n, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_diag_dominant(n, density, rng);
}

std::set<std::pair<Index, Index>> fill_pattern(const FillLevels& f) {
  std::set<std::pair<Index, Index>> s;
  for (Index i = 0; i < f.n; ++i)
    for (Offset q = f.row_ptr[i]; q < f.row_ptr[i + 1]; ++q) s.emplace(i, f.col_idx[q]);
  return s;
}

bool bitwise_equal(const Vector& a, const Vector& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(Real)) == 0;
}

}  // namespace

TEST(IluSymbolic, LevelsMatchFillPathOracle) {
  std::vector<SparseCsr> mats{poisson2d(5, 5), random_with_diagonal(40, 0.06, 1),
                              random_with_diagonal(35, 0.1, 2)};
  for (const auto& a : mats) {
    const auto oracle = fill_path_levels(a);
    for (Index k = 0; k <= 3; ++k) {
      const FillLevels f = ilu_symbolic(a, k);
      Offset expected = 0;
      for (Index i = 0; i < a.n_rows; ++i)
        for (Index j = 0; j < a.n_rows; ++j) expected += oracle[i][j] <= k;
      ASSERT_EQ(f.nnz(), expected) << "k=" << k;
      for (Index i = 0; i < f.n; ++i)
        for (Offset q = f.row_ptr[i]; q < f.row_ptr[i + 1]; ++q)
          EXPECT_EQ(f.level[q], oracle[i][f.col_idx[q]]) << i << "," << f.col_idx[q] << " k=" << k;
    }
  }
}

TEST(IluSymbolic, LevelZeroKeepsThePatternOfA) {
  for (const auto& a : {poisson3d(6, 5, 4), random_with_diagonal(60, 0.05, 3)}) {
    EXPECT_EQ(fill_pattern(ilu_symbolic(a, 0)), pattern_of(a));
    EXPECT_EQ(pattern_of(ilu(a, 0).combined), pattern_of(a));
  }
}

TEST(IluSymbolic, PatternsNestInK) {
  const SparseCsr a = random_with_diagonal(80, 0.04, 4);
  for (Index k = 0; k < 3; ++k) {
    const auto lo = fill_pattern(ilu_symbolic(a, k));
    const auto hi = fill_pattern(ilu_symbolic(a, k + 1));
    EXPECT_TRUE(std::includes(hi.begin(), hi.end(), lo.begin(), lo.end())) << k;
  }
}

TEST(IluSymbolic, MissingDiagonalIsAZeroPivot) {
  const SparseCsr a = csr_from_triplets(3, 3, {{0, 0, 1.0}, {1, 0, 1.0}, {2, 2, 1.0}});
  try {
    ilu_symbolic(a, 0);
    FAIL() << "expected ZeroPivotError";
  } catch (const ZeroPivotError& e) {
    EXPECT_EQ(e.row(), 1);
  }
}

TEST(IluNumeric, ProductMatchesAOnThePattern) {
  const SparseCsr a = random_with_diagonal(50, 0.08, 5);
  for (Index k = 0; k <= 3; ++k) {
    const IluFactors f = ilu(a, k);
    const Eigen::MatrixXd lu = to_dense(lower_factor(f)) * to_dense(upper_factor(f));
    const Eigen::MatrixXd da = to_dense(a);
    for (const auto& [i, j] : pattern_of(f.combined))
      EXPECT_NEAR(lu(i, j), da(i, j), 1e-12 * da.cwiseAbs().maxCoeff()) << i << "," << j;
  }
}

TEST(IluNumeric, FullFillIsExactLu) {
  const SparseCsr a = random_with_diagonal(30, 0.1, 6);
  const IluFactors f = ilu(a, 30);
  const Eigen::MatrixXd lu = to_dense(lower_factor(f)) * to_dense(upper_factor(f));
  EXPECT_LT((lu - to_dense(a)).norm(), 1e-12 * to_dense(a).norm());
}

TEST(IluNumeric, FillFreeMatrixFactorsExactly) {
  const SparseCsr a = laplacian1d(100);
  for (Index k = 0; k <= 3; ++k) {
    const IluFactors f = ilu(a, k);
    EXPECT_EQ(f.combined.nnz(), a.nnz());
    const Eigen::MatrixXd r = to_dense(lower_factor(f)) * to_dense(upper_factor(f)) - to_dense(a);
    const Real a_inf = inf_norm(a);
    EXPECT_LE(r.cwiseAbs().rowwise().sum().maxCoeff(), 1e-12 * a_inf);
  }
}

TEST(IluNumeric, ZeroPivotIsReportedWithRow) {
  const SparseCsr a = csr_from_triplets(2, 2, {{0, 0, 0.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}});
  try {
    ilu(a, 0);
    FAIL() << "expected ZeroPivotError";
  } catch (const ZeroPivotError& e) {
    EXPECT_EQ(e.row(), 0);
  }
  IluOptions shifted;
  shifted.shift_on_zero_pivot = true;
  const IluFactors f = ilu(a, 0, shifted);
  EXPECT_TRUE(all_finite(f.combined.values));
}

TEST(IluNumeric, SingularAfterEliminationIsReported) {
  // second pivot becomes 1 - 1*1 = 0
  const SparseCsr a = csr_from_triplets(2, 2, {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}});
  try {
    ilu(a, 0);
    FAIL() << "expected ZeroPivotError";
  } catch (const ZeroPivotError& e) {
    EXPECT_EQ(e.row(), 1);
  }
}

TEST(LevelSchedule, LevelsAreLongestPathDepths) {
  for (const auto& a : {poisson3d(7, 6, 5), random_with_diagonal(90, 0.04, 7)}) {
    const IluFactors f = ilu(a, 1);
    const SparseCsr l = lower_factor(f), u = upper_factor(f);
    EXPECT_EQ(level_of_rows(f.lower_schedule, a.n_rows), dag_depths(l, true));
    EXPECT_EQ(level_of_rows(f.upper_schedule, a.n_rows), dag_depths(u, false));
  }
}

TEST(LevelSchedule, EveryDependencyLiesInAnEarlierLevel) {
  const IluFactors f = ilu(poisson3d(9, 9, 9), 2);
  const SparseCsr l = lower_factor(f);
  const auto lev = level_of_rows(f.lower_schedule, l.n_rows);
  for (Index t = 0; t < f.lower_schedule.n_levels; ++t) {
    const auto rows = f.lower_schedule.level(t);
    EXPECT_TRUE(std::is_sorted(rows.begin(), rows.end()));
    for (Index i : rows)
      for (Index j : l.row_cols(i))
        if (j < i) {
          EXPECT_LT(lev[j], t);
        }
  }
}

TEST(LevelSchedule, RejectsEntriesInTheWrongTriangle) {
  EXPECT_THROW(build_level_schedule(laplacian1d(4), Triangle::Lower), FormatError);
  const LevelSchedule s = build_level_schedule_strict(laplacian1d(4), Triangle::Lower);
  EXPECT_EQ(s.n_levels, 4);
  const LevelSchedule diag = build_level_schedule(SparseCsr::identity(5), Triangle::Upper);
  EXPECT_EQ(diag.n_levels, 1);
}

TEST(Trisolve, SolvesTheFactoredSystem) {
  const SparseCsr a = random_with_diagonal(40, 0.1, 8);
  const IluFactors f = ilu(a, 1);
  std::mt19937_64 rng(1);
  const Vector b = random_vector(40, rng);
  const Vector x = trisolve(f, b);
  const Eigen::MatrixXd lu = to_dense(lower_factor(f)) * to_dense(upper_factor(f));
  const Eigen::VectorXd ref = lu.lu().solve(to_eigen(b));
  EXPECT_LT(rel_diff(x, from_eigen(ref)), 1e-12);
}

TEST(Trisolve, ScheduledEqualsSequentialBitwise) {
  const SparseCsr a = poisson3d(40, 40, 40);
  const IluFactors f = ilu(a, 1);
  Index widest = 0;
  for (Index t = 0; t < f.lower_schedule.n_levels; ++t)
    widest = std::max<Index>(widest, static_cast<Index>(f.lower_schedule.level(t).size()));
  ASSERT_GE(widest, kParallelLevelMin);  // the parallel branch is exercised
  std::mt19937_64 rng(2);
  const Vector b = random_vector(a.n_rows, rng);
  Vector ref(a.n_rows);
  trisolve_sequential(f, b, ref);
  for (int w : {1, 2, 4}) {
    WorkerScope scope(w);
    EXPECT_TRUE(bitwise_equal(trisolve(f, b), ref)) << w << " workers";
  }
}

TEST(Ras, SingleBlockWithoutOverlapIsGlobalIlu) {
  const SparseCsr a = poisson3d(10, 9, 8);
  std::vector<Index> all(a.n_rows);
  for (Index i = 0; i < a.n_rows; ++i) all[i] = i;
  const RasBlocks blocks = extract_blocks(a, {all}, 0);
  std::mt19937_64 rng(3);
  const Vector r = random_vector(a.n_rows, rng);
  for (Index k : {0, 2}) {
    const auto factors = factorize_blocks(blocks, k);
    EXPECT_TRUE(bitwise_equal(ras_apply(blocks, factors, r), trisolve(ilu(a, k), r)));
    RasOptions o;
    o.fill_level = k;
    const RasIluPreconditioner m(a, o);
    const IluPreconditioner g(a, k);
    Vector z1(a.n_rows), z2(a.n_rows);
    m.apply(r, z1);
    g.apply(r, z2);
    EXPECT_TRUE(bitwise_equal(z1, z2));
  }
}

TEST(Ras, EveryRowIsWrittenByExactlyOneTask) {
  const SparseCsr a = poisson3d(12, 12, 12);
  RasOptions o;
  o.outer_parts = 3;
  o.inner_parts = 5;
  o.outer_overlap = 1;
  o.inner_overlap = 1;
  const RasIluPreconditioner m(a, o);
  EXPECT_EQ(m.tasks().size(), 15u);
  std::vector<int> written(a.n_rows, 0);
  for (const auto& t : m.tasks()) {
    ASSERT_EQ(t.write_local.size(), t.write_global.size());
    for (std::size_t q = 0; q < t.write_local.size(); ++q)
      EXPECT_EQ(t.local_to_global[t.write_local[q]], t.write_global[q]);
    for (Index g : t.write_global) ++written[g];
  }
  EXPECT_TRUE(std::all_of(written.begin(), written.end(), [](int c) { return c == 1; }));
}

TEST(Ras, BlockDiagonalMatrixWithExactBlocksIsExactInverse) {
  // two decoupled chains, one block each, full fill: RAS = A^{-1}
  std::vector<Triplet> t;
  for (Index off : {0, 20}) {
    for (Index i = 0; i < 20; ++i) {
      t.push_back({off + i, off + i, 3.0});
      if (i + 1 < 20) {
        t.push_back({off + i, off + i + 1, -1.0});
        t.push_back({off + i + 1, off + i, -1.5});
      }
    }
  }
  const SparseCsr a = csr_from_triplets(40, 40, t);
  std::vector<std::vector<Index>> owned(2);
  for (Index i = 0; i < 40; ++i) owned[i / 20].push_back(i);
  const RasBlocks blocks = extract_blocks(a, owned, 2);
  std::mt19937_64 rng(4);
  const Vector r = random_vector(40, rng);
  const Vector z = ras_apply(blocks, factorize_blocks(blocks, 0), r);
  const Vector ref = from_eigen(to_dense(a).lu().solve(to_eigen(r)));
  EXPECT_LT(rel_diff(z, ref), 1e-12);
}

TEST(Ras, OverlapAndFillIncreaseFactorSize) {
  const SparseCsr a = poisson3d(10, 10, 10);
  RasOptions o;
  o.outer_parts = 2;
  o.inner_parts = 4;
  const Offset base = RasIluPreconditioner(a, o).factor_nnz();
  o.fill_level = 1;
  EXPECT_GT(RasIluPreconditioner(a, o).factor_nnz(), base);
  o.fill_level = 0;
  o.inner_overlap = 1;
  EXPECT_GT(RasIluPreconditioner(a, o).factor_nnz(), base);
}

TEST(Ras, MismatchedFactorsAreRejected) {
  const SparseCsr a = laplacian1d(8);
  const RasBlocks blocks = extract_blocks(a, {{0, 1, 2, 3}, {4, 5, 6, 7}}, 0);
  std::vector<IluFactors> one{ilu(blocks.blocks[0].local_matrix, 0)};
  EXPECT_THROW(ras_apply(blocks, one, Vector(8, 1.0)), Error);
}
