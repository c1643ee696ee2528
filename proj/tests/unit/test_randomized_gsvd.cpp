#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "rgsvd/errors.hpp"
#include "rgsvd/problems.hpp"
#include "rgsvd/randomized_gsvd.hpp"
#include "test_support.hpp"

using namespace rgsvd;
namespace support = rgsvd::support;

namespace {

SamplerConfig config(double eps, Index b, std::uint64_t seed) {
  SamplerConfig c;
  c.epsilon = eps;
  c.blocksize = b;
  c.seed = seed;
  return c;
}

void expect_identities(const ApproxGsvd& g, const Matrix& a, const Matrix& l) {
  const auto res = approx_residuals(g, a, l);
  EXPECT_LE(res.alpha_identity, 1e-8 * a.norm());
  EXPECT_LE(res.beta_identity, 1e-8 * l.norm());
  EXPECT_LE(orthonormality_defect(g.u2), 1e-10 * std::max<Index>(1, g.u2.cols()));
  EXPECT_LE(orthonormality_defect(g.p), 1e-10 * std::max<Index>(1, g.p.cols()));
  EXPECT_LE(orthonormality_defect(g.q), 1e-10 * std::max<Index>(1, g.q.cols()));
  EXPECT_LE(g.l2, g.l1);
  EXPECT_LE(g.l1, std::min(a.rows(), a.cols()));
  const Vector sz = singular_values(g.z);
  EXPECT_GT(sz(sz.size() - 1), 1e-12 * sz(0));
}

}  // namespace

TEST(Rgsvd, Stage2SeedDiffersFromStage1) {
  EXPECT_NE(stage2_seed(0), 0u);
  EXPECT_NE(stage2_seed(5), stage2_seed(6));
}

TEST(RgsvdOverdetermined, IdentityOperatorIsCapturedExactly) {
  const Matrix a = Matrix::Identity(16, 16);
  const Matrix l = first_difference(16);
  const auto g = rgsvd_overdetermined(a, l, config(1e-6, 4, 3));
  EXPECT_EQ(g.l1, 16);
  EXPECT_EQ(g.l2, 16);
  EXPECT_EQ(g.branch, RgsvdBranch::over);
  EXPECT_EQ(g.inner.branch, GsvdBranch::tall);
  const auto res = approx_residuals(g, a, l);
  EXPECT_LE(res.compression, 1e-8);
  expect_identities(g, a, l);
}

TEST(RgsvdOverdetermined, RankSaturation) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Matrix a = Matrix::Zero(100, 50);
    a.leftCols(30) = support::with_singular_values(100, 30, Vector::LinSpaced(3, 1.0, 2.0), 9);
    const auto g = rgsvd_overdetermined(a, first_difference(50), config(1e-6, 2, seed));
    EXPECT_EQ(g.l1, 3);
    EXPECT_EQ(g.l2, 3);
  }
}

TEST(RgsvdOverdetermined, ShawSampleCountsAreSmall) {
  const auto d = shaw(2048);
  const auto g = rgsvd_overdetermined(d.a, first_difference(2048), config(1e-2, 4, 1));
  EXPECT_GE(g.l1, 4);
  EXPECT_LE(g.l1, 16);
  EXPECT_LE(g.l2, g.l1);
  expect_identities(g, d.a, first_difference(2048));
}

TEST(RgsvdOverdetermined, FactorIdentitiesOnTestProblems) {
  for (auto gen : {gravity, phillips, foxgood}) {
    const auto d = gen(256);
    const Matrix l = first_difference(256);
    for (double eps : {1e-1, 1e-2, 1e-3}) {
      const auto g = rgsvd_overdetermined(d.a, l, config(eps, 4, 2));
      expect_identities(g, d.a, l);
    }
  }
}

TEST(RgsvdOverdetermined, CompressionBoundedByStageResiduals) {
  const auto d = shaw(256);
  const Matrix l = first_difference(256);
  std::vector<double> errs;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = rgsvd_overdetermined(d.a, l, config(1e-2, 4, seed));
    const double stage1 = (d.a - g.p * (g.p.transpose() * d.a)).norm();
    const Matrix pta = g.p.transpose() * d.a;
    const double stage2 = (pta - (pta * g.q) * g.q.transpose()).norm();
    const double total = approx_residuals(g, d.a, l).compression;
    EXPECT_LE(total, stage1 + stage2 + 1e-12);
    EXPECT_LE(stage1, 10 * 1e-2);
    EXPECT_LE(stage2, 10 * 1e-2);
    errs.push_back(stage1);
  }
  std::sort(errs.begin(), errs.end());
  EXPECT_LE(errs[10], 2e-2);
}

TEST(RgsvdOverdetermined, ExactnessLimit) {
  const Matrix a = support::random_matrix(40, 30, 5);
  const Matrix l = first_difference(30);
  const auto g = rgsvd_overdetermined(a, l, config(1e-12, 4, 8));
  EXPECT_EQ(g.l1, 30);
  EXPECT_EQ(g.l2, 30);
  const auto res = approx_residuals(g, a, l);
  EXPECT_LE(res.compression, 1e-8 * a.norm());
  const Matrix lqq = l * g.q * g.q.transpose();
  EXPECT_LE((lqq - l).norm(), 1e-8 * l.norm());
}

TEST(RgsvdOverdetermined, DeterministicPerSeed) {
  const auto d = heat(128);
  const Matrix l = first_difference(128);
  const auto g1 = rgsvd_overdetermined(d.a, l, config(1e-3, 4, 21));
  const auto g2 = rgsvd_overdetermined(d.a, l, config(1e-3, 4, 21));
  EXPECT_TRUE((g1.z.array() == g2.z.array()).all());
  EXPECT_TRUE((g1.u2.array() == g2.u2.array()).all());
  EXPECT_TRUE((g1.inner.alpha.array() == g2.inner.alpha.array()).all());
}

TEST(RgsvdOverdetermined, ZeroOperatorIsDegenerate) {
  const auto g = rgsvd_overdetermined(Matrix::Zero(12, 10), first_difference(10),
                                      config(1e-3, 2, 1));
  EXPECT_TRUE(g.degenerate());
  EXPECT_EQ(g.l1, 0);
  EXPECT_EQ(g.z.cols(), 10);
}

TEST(RgsvdOverdetermined, InnerRankLossIsReported) {
  const auto d = shaw(256);
  EXPECT_THROW(rgsvd_overdetermined(d.a, first_difference(256), config(1e-9, 4, 1)), RankError);
}

TEST(RgsvdOverdetermined, ShapeErrors) {
  EXPECT_THROW(rgsvd_overdetermined(Matrix::Ones(3, 5), first_difference(5), config(1e-2, 1, 0)),
               DimensionError);
  EXPECT_THROW(rgsvd_overdetermined(Matrix::Ones(6, 5), first_difference(4), config(1e-2, 1, 0)),
               DimensionError);
}

TEST(RgsvdUnderdetermined, SelectorMatrix) {
  Matrix a = Matrix::Zero(8, 16);
  a.leftCols(8) = Matrix::Identity(8, 8);
  const Matrix l = Matrix::Identity(16, 16);
  const auto g = rgsvd_underdetermined(a, l, config(1e-6, 3, 4));
  EXPECT_EQ(g.branch, RgsvdBranch::under);
  EXPECT_EQ(g.l1, 8);
  EXPECT_EQ(g.l2, 8);
  EXPECT_LE(approx_residuals(g, a, l).compression, 1e-8);
  expect_identities(g, a, l);
}

TEST(RgsvdUnderdetermined, TruncatedHeatSampleCounts) {
  const auto full = heat(2048);
  const Matrix a = full.a.topRows(1024);
  const Matrix l = first_difference(2048);
  const auto g = rgsvd_underdetermined(a, l, config(1e-2, 4, 2));
  EXPECT_GE(g.l1, 8);
  EXPECT_LE(g.l1, 60);
  EXPECT_LE(g.l2, g.l1);
  expect_identities(g, a, l);
}

TEST(RgsvdUnderdetermined, WideInnerPair) {
  const Matrix a = support::random_matrix(20, 40, 3);
  const Matrix l = first_difference(40);
  const auto g = rgsvd_underdetermined(a, l, config(1e-12, 4, 6));
  EXPECT_EQ(g.l1, 20);
  EXPECT_EQ(g.l2, 20);
  EXPECT_LE(approx_residuals(g, a, l).compression, 1e-8 * a.norm());
  expect_identities(g, a, l);
}

TEST(RgsvdUnderdetermined, ToleranceSweepIsMonotone) {
  const auto full = shaw(512);
  const Matrix a = full.a.topRows(256);
  const Matrix l = first_difference(512);
  Index previous = 0;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const auto g = rgsvd_underdetermined(a, l, config(eps, 4, 13));
    EXPECT_GE(g.l1, previous);
    previous = g.l1;
  }
}

TEST(Rgsvd, DispatchesOnShape) {
  const Matrix l = first_difference(10);
  EXPECT_EQ(rgsvd::rgsvd(support::random_matrix(12, 10, 1), l, config(1e-2, 2, 1)).branch,
            RgsvdBranch::over);
  EXPECT_EQ(rgsvd::rgsvd(support::random_matrix(6, 10, 1), l, config(1e-2, 2, 1)).branch,
            RgsvdBranch::under);
}

TEST(ApproxGsvdIo, RoundTrip) {
  const auto dir = support::scratch_dir("approx_io");
  const auto d = gravity(64);
  const auto g = rgsvd_overdetermined(d.a, first_difference(64), config(1e-4, 4, 3));
  save_approx_gsvd(dir, g);
  const auto back = load_approx_gsvd(dir);
  EXPECT_TRUE((back.z.array() == g.z.array()).all());
  EXPECT_TRUE((back.p.array() == g.p.array()).all());
  EXPECT_TRUE((back.q.array() == g.q.array()).all());
  EXPECT_TRUE((back.inner.x.array() == g.inner.x.array()).all());
  EXPECT_EQ(back.l1, g.l1);
  EXPECT_EQ(back.l2, g.l2);
  EXPECT_EQ(back.seed, g.seed);
  EXPECT_EQ(back.epsilon, g.epsilon);
  EXPECT_EQ(back.branch, g.branch);
}
