#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "lrpgd/ground_truth.hpp"
#include "lrpgd/linalg.hpp"
#include "lrpgd/matrix_io.hpp"
#include "lrpgd/rng.hpp"
#include "oracles.hpp"

using namespace lrpgd;

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  const MatrixXd A = a.gaussian(4, 5), B = b.gaussian(4, 5), C = c.gaussian(4, 5);
  EXPECT_EQ(A, B);
  EXPECT_NE(A, C);
}

TEST(Rng, UniformStrictlyInsideUnitInterval) {
  Rng r(7);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, NormalMoments) {
  Rng r(3);
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.01);
}

TEST(Rng, GaussianFillsRowMajor) {
  Rng a(11), b(11);
  const MatrixXd G = a.gaussian(2, 3);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 3; ++j) EXPECT_EQ(G(i, j), b.normal());
}

TEST(Rng, SampleWithoutReplacementDistinct) {
  Rng r(5);
  const auto idx = r.sample_without_replacement(100, 60);
  ASSERT_EQ(idx.size(), 60u);
  std::set<std::uint64_t> seen(idx.begin(), idx.end());
  EXPECT_EQ(seen.size(), 60u);
  EXPECT_LT(*seen.rbegin(), 100u);
  EXPECT_THROW(r.sample_without_replacement(3, 4), std::invalid_argument);
}

TEST(Rng, DerivedSeedsDiffer) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(9, 4), derive_seed(9, 4));
}

TEST(GroundTruth, IllConditionedSpectrum) {
  const auto gt = make_ground_truth(10, 2, 1e2, true, 1);
  ASSERT_EQ(gt.spectrum.size(), 2);
  EXPECT_DOUBLE_EQ(gt.spectrum(0), 1.0);
  EXPECT_NEAR(gt.spectrum(1), 1e-2, 1e-17);
  EXPECT_DOUBLE_EQ(gt.conditionNumber, 100.0);
  const auto sv = oracle::jacobi_singular_values(gt.mstar);
  EXPECT_NEAR(sv(0), 1.0, 1e-12);
  EXPECT_NEAR(sv(1), 1e-2, 1e-12);
  EXPECT_NEAR(sv(2), 0.0, 1e-12);
  EXPECT_NEAR((gt.mstar - gt.mstar.transpose()).norm(), 0.0, 1e-15);
  EXPECT_NEAR((gt.factorZ() * gt.factorZ().transpose() - gt.mstar).norm(), 0.0, 1e-14);
}

TEST(GroundTruth, UnitSpectrumIsProjector) {
  const auto gt = make_ground_truth(10, 2, 1.0, true, 2);
  EXPECT_EQ(gt.spectrum, VectorXd::Ones(2));
  EXPECT_NEAR((gt.mstar * gt.mstar - gt.mstar).norm(), 0.0, 1e-13);
  EXPECT_NEAR(gt.mstar.trace(), 2.0, 1e-13);
}

TEST(GroundTruth, FullRankUnitSpectrumIsIdentity) {
  const auto gt = make_ground_truth(5, 5, 1.0, true, 3);
  EXPECT_NEAR((gt.mstar - MatrixXd::Identity(5, 5)).norm(), 0.0, 1e-13);
}

TEST(GroundTruth, AsymmetricFactors) {
  const auto gt = make_ground_truth(8, 3, 10.0, false, 4);
  EXPECT_FALSE(gt.symmetric);
  EXPECT_NEAR((gt.left * gt.right.transpose() - gt.mstar).norm(), 0.0, 1e-13);
  const auto sv = oracle::jacobi_singular_values(gt.mstar);
  EXPECT_NEAR(sv(0), 1.0, 1e-12);
  EXPECT_NEAR(sv(2), 0.1, 1e-12);
}

TEST(GroundTruth, RejectsBadArguments) {
  EXPECT_THROW(make_ground_truth(3, 4, 1.0, true, 1), std::invalid_argument);
  EXPECT_THROW(make_ground_truth(3, 2, 0.5, true, 1), std::invalid_argument);
}

TEST(GroundTruth, PhaseTruthRankOne) {
  const auto gt = make_phase_truth(6, 1);
  EXPECT_EQ(gt.trueRank, 1);
  EXPECT_NEAR((gt.mstar - gt.mstar.adjoint()).norm(), 0.0, 1e-14);
  EXPECT_NEAR((gt.left * gt.left.adjoint() - gt.mstar).norm(), 0.0, 1e-13);
}

TEST(SvdTopR, Diagonal) {
  const MatrixXd M = VectorXd::LinSpaced(3, 3, 1).asDiagonal();
  const auto s = svd_top_r(M, 2);
  EXPECT_DOUBLE_EQ(s.sigma(0), 3.0);
  EXPECT_DOUBLE_EQ(s.sigma(1), 2.0);
}

TEST(SvdTopR, ZeroMatrix) {
  const auto s = svd_top_r(MatrixXd::Zero(4, 3), 1);
  EXPECT_EQ(s.sigma(0), 0.0);
  EXPECT_EQ(s.Q.rows(), 4);
  EXPECT_EQ(s.S.rows(), 3);
}

TEST(SvdTopR, TailMatchesJacobiOracle) {
  Rng rng(8);
  const MatrixXd M = rng.gaussian(8, 6);
  const auto s = svd_top_r(M, 3);
  const VectorXd sv = oracle::jacobi_singular_values(M);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(s.sigma(k), sv(k), 1e-12);
  const double tail = sv.tail(3).norm();
  const MatrixXd approx = s.Q * s.sigma.asDiagonal() * s.S.transpose();
  EXPECT_NEAR((M - approx).norm(), tail, 1e-12);
  EXPECT_NEAR((s.Q.transpose() * s.Q - MatrixXd::Identity(3, 3)).norm(), 0.0, 1e-13);
  EXPECT_NEAR((s.S.transpose() * s.S - MatrixXd::Identity(3, 3)).norm(), 0.0, 1e-13);
}

TEST(SvdTopR, FullRankReconstructs) {
  Rng rng(9);
  const MatrixXd M = rng.gaussian(7, 5);
  const auto s = svd_top_r(M, 5);
  EXPECT_LE((M - s.Q * s.sigma.asDiagonal() * s.S.transpose()).norm(), 1e-9);
}

TEST(SvdTopR, RejectsOversizedRank) { EXPECT_THROW(svd_top_r(MatrixXd::Zero(3, 2), 3), std::invalid_argument); }

TEST(SpdSolve, ScalarShifts) {
  Rng rng(1);
  const MatrixXd B = rng.gaussian(5, 3);
  EXPECT_NEAR((spd_solve(MatrixXd::Zero(3, 3), 2.0, B) - B / 2).norm(), 0.0, 1e-15);
  EXPECT_NEAR((spd_solve(MatrixXd::Identity(3, 3), 1.0, B) - B / 2).norm(), 0.0, 1e-15);
}

TEST(SpdSolve, TwoByTwoAdjugate) {
  MatrixXd G(2, 2);
  G << 2, 1, 1, 2;
  const MatrixXd got = spd_solve(G, 0.0, MatrixXd::Identity(2, 2));
  MatrixXd want(2, 2);
  want << 2.0 / 3, -1.0 / 3, -1.0 / 3, 2.0 / 3;
  EXPECT_NEAR((got - want).norm(), 0.0, 1e-15);
  EXPECT_NEAR((got - oracle::adjugate_inverse_2x2(G)).norm(), 0.0, 1e-15);
}

TEST(SpdSolve, RandomInstancesSatisfyNormalEquation) {
  Rng rng(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index r = 1 + static_cast<Index>(rng.below(16));
    const Index n = 1 + static_cast<Index>(rng.below(20));
    const MatrixXd X = rng.gaussian(n + r, r);
    const MatrixXd G = X.transpose() * X;
    const double eta = rng.uniform();
    const MatrixXd B = rng.gaussian(n, r);
    const MatrixXd Y = spd_solve(G, eta, B);
    MatrixXd H = G;
    H.diagonal().array() += eta;
    ASSERT_LE((Y * H - B).norm(), 1e-10 * std::max(1.0, B.norm() * H.norm())) << "trial " << trial;
  }
}

TEST(SpdSolve, SingularThrows) {
  EXPECT_THROW(spd_solve(MatrixXd::Zero(2, 2), 0.0, MatrixXd::Ones(3, 2)), DefinitenessError);
  MatrixXd G(2, 2);
  G << 1, 2, 2, 1;
  EXPECT_THROW(spd_solve(G, 0.0, MatrixXd::Ones(1, 2)), DefinitenessError);
  EXPECT_THROW(spd_solve(MatrixXd::Identity(2, 2), 0.0, MatrixXd::Ones(1, 3)), std::invalid_argument);
}

TEST(FroError, ExactFactorIsZero) {
  const auto gt = make_ground_truth(10, 2, 100, true, 5);
  EXPECT_NEAR(fro_error(MatrixXd(gt.factorZ()), gt), 0.0, 1e-14);
}

TEST(FroError, ZeroIterateGivesSpectrumNorm) {
  MatrixXd Q = MatrixXd::Identity(10, 2);
  VectorXd spec(2);
  spec << 1, 1e-2;
  const auto gt = ground_truth_from_factors(Q, spec, Q);
  EXPECT_NEAR(fro_error(MatrixXd::Zero(10, 3).eval(), gt), std::sqrt(1 + 1e-4), 1e-15);
}

TEST(FroError, MatchesDoubleLoop) {
  const auto gt = make_ground_truth(9, 3, 10, true, 6);
  Rng rng(6);
  const MatrixXd X = rng.gaussian(9, 4);
  EXPECT_NEAR(fro_error(X, gt), oracle::fro_diff_loop(X * X.transpose(), gt.mstar), 1e-12);
  const auto ga = make_ground_truth(9, 3, 10, false, 7);
  const FactorPair fp{rng.gaussian(9, 2), rng.gaussian(9, 2)};
  EXPECT_NEAR(fro_error(fp, ga), oracle::fro_diff_loop(fp.U * fp.V.transpose(), ga.mstar), 1e-12);
}

TEST(FroError, ShapeMismatchThrows) {
  const auto gt = make_ground_truth(4, 1, 1, true, 1);
  EXPECT_THROW(fro_error(MatrixXd::Zero(3, 1).eval(), gt), std::invalid_argument);
}

TEST(MatrixIo, RoundTripIsExact) {
  Rng rng(2);
  MatrixXd M = rng.gaussian(4, 3);
  M(0, 0) = 1e-310;
  M(1, 1) = -0.0;
  M(2, 2) = 1e300;
  std::stringstream ss;
  write_matrix(ss, M);
  const MatrixXd back = read_matrix(ss);
  ASSERT_EQ(back.rows(), 4);
  ASSERT_EQ(back.cols(), 3);
  for (Index k = 0; k < M.size(); ++k) EXPECT_EQ(back(k), M(k));
}

TEST(MatrixIo, WritesRowsInOrder) {
  MatrixXd M(2, 2);
  M << 1, 2, 3, 4;
  std::stringstream ss;
  write_matrix(ss, M);
  EXPECT_EQ(ss.str(), "2 2\n1 2\n3 4\n");
}

TEST(MatrixIo, MalformedInputThrows) {
  std::stringstream ss("2 2\n1 2\n3\n");
  EXPECT_THROW(read_matrix(ss), std::runtime_error);
}
