#include <cmath>

#include <gtest/gtest.h>

#include "lrpgd/ultrasound.hpp"
#include "oracles.hpp"

using namespace lrpgd;

namespace {

StepConfig completion_config(Index n1, Index n2, std::size_t iters) {
  StepConfig c;
  c.method = MethodKind::DecayPrecGD;
  c.alpha = kCompletionAlphaPerEntry * static_cast<double>(n1 * n2);
  c.beta = 0.05;
  c.maxIters = iters;
  return c;
}

double rel_err(const MatrixXd& a, const MatrixXd& truth) { return (a - truth).norm() / truth.norm(); }

}  // namespace

TEST(SynthStack, NoiselessStackIsTruth) {
  const auto s = synth_frame_stack(6, 5, 12, 3, 0.0, 1);
  EXPECT_EQ(s.noisy.spaceTime, s.truth.mstar);
  const VectorXd sv = oracle::jacobi_singular_values(s.truth.mstar);
  EXPECT_NEAR(sv(0) / sv(2), kSynthKappa, 1e-9);
  EXPECT_LE(sv(3), 1e-10 * sv(0));
}

TEST(SynthStack, RankOneFramesAreProportional) {
  const auto s = synth_frame_stack(7, 6, 15, 1, 0.0, 2);
  const MatrixXd f0 = s.noisy.frame(0);
  ASSERT_GT(f0.norm(), 0.0);
  for (Index k = 1; k < s.noisy.frame_count(); ++k) {
    const MatrixXd fk = s.noisy.frame(k);
    const double c = oracle::frob_inner(fk, f0) / f0.squaredNorm();
    EXPECT_LE((fk - c * f0).norm(), 1e-12 * std::max(1.0, fk.norm()));
  }
}

TEST(SynthStack, DeskScaleShape) {
  const auto s = synth_frame_stack(50, 40, 200, 10, 0.1, 3);
  EXPECT_EQ(s.noisy.spaceTime.rows(), 2000);
  EXPECT_EQ(s.noisy.spaceTime.cols(), 200);
  EXPECT_EQ(s.noisy.frame(3).rows(), 50);
  EXPECT_EQ(s.noisy.frame(3).cols(), 40);
}

TEST(SynthStack, FrameLayoutIsColumnStacked) {
  const auto s = synth_frame_stack(4, 3, 5, 2, 0.0, 4);
  EXPECT_EQ(s.noisy.frame(2)(1, 2), s.noisy.spaceTime(1 + 4 * 2, 2));
}

TEST(SynthStack, NoiseLevelForSnr) {
  const auto clean = synth_frame_stack(20, 10, 50, 4, 0.0, 5);
  const double sigma = sigma_for_snr(clean.truth.mstar, 20.0);
  const auto noisy = synth_frame_stack(20, 10, 50, 4, sigma, 5);
  const MatrixXd noise = noisy.noisy.spaceTime - noisy.truth.mstar;
  const double snr = 10 * std::log10(noisy.truth.mstar.squaredNorm() / noise.squaredNorm());
  EXPECT_NEAR(snr, 20.0, 0.2);
}

TEST(PowerDoppler, ConstantStackIsZeroDb) {
  const auto st = stack_from_space_time(MatrixXd::Constant(12, 5, -2.5), 3, 4);
  EXPECT_EQ(power_doppler(st), MatrixXd::Zero(3, 4));
}

TEST(PowerDoppler, DoubleAmplitudeSeparation) {
  MatrixXd M = MatrixXd::Ones(2, 6);
  M.row(0) *= 2.0;
  const MatrixXd img = power_doppler(stack_from_space_time(M, 2, 1));
  EXPECT_EQ(img(0, 0), 0.0);
  EXPECT_NEAR(img(0, 0) - img(1, 0), 20 * std::log10(4.0), 1e-12);
  EXPECT_NEAR(img(0, 0) - img(1, 0), 12.04, 5e-3);
}

TEST(PowerDoppler, NormalizedMaximumAndZeroPixels) {
  const auto s = synth_frame_stack(8, 6, 20, 3, 0.05, 6);
  EXPECT_EQ(power_doppler(s.noisy).maxCoeff(), 0.0);
  MatrixXd M = MatrixXd::Ones(3, 4);
  M.row(1).setZero();
  const MatrixXd img = power_doppler(stack_from_space_time(M, 3, 1));
  EXPECT_EQ(img(1, 0), -60.0);
  EXPECT_EQ(power_doppler(stack_from_space_time(MatrixXd::Zero(6, 2), 2, 3)), MatrixXd::Zero(2, 3));
}

TEST(Denoise, FullNoiselessSamplingIsExact) {
  const auto s = synth_frame_stack(10, 8, 30, 3, 0.0, 7);
  for (Index r : {3, 4}) {
    const auto d = denoise_pipeline(s.noisy, r, 1.0, completion_config(80, 30, 20), 8, s.truth);
    EXPECT_LE(rel_err(d.denoised.spaceTime, s.truth.mstar), 1e-6) << "r=" << r;
  }
}

TEST(Denoise, HalfSamplingBeatsNoisyInput) {
  const auto clean = synth_frame_stack(20, 20, 60, 3, 0.0, 9);
  const double sigma = sigma_for_snr(clean.truth.mstar, 20.0);
  const auto s = synth_frame_stack(20, 20, 60, 3, sigma, 9);
  const auto d = denoise_pipeline(s.noisy, 3, 0.5, completion_config(400, 60, 30), 10, s.truth);
  EXPECT_LT(rel_err(d.denoised.spaceTime, s.truth.mstar), rel_err(s.noisy.spaceTime, s.truth.mstar));
  EXPECT_TRUE(d.run.trace.back().errFro.has_value());
}

TEST(Denoise, FullSamplingMatchesTruncatedSvd) {
  const auto clean = synth_frame_stack(12, 10, 40, 4, 0.0, 11);
  const auto s = synth_frame_stack(12, 10, 40, 4, sigma_for_snr(clean.truth.mstar, 20.0), 11);
  const auto d = denoise_pipeline(s.noisy, 4, 1.0, completion_config(120, 40, 30), 12);
  const MatrixXd tsvd = truncated_svd_denoise(s.noisy, 4).spaceTime;
  EXPECT_LE(rel_err(d.denoised.spaceTime, tsvd), 1e-4);
}

TEST(Denoise, RejectsBadShapes) {
  EXPECT_THROW(stack_from_space_time(MatrixXd::Zero(5, 2), 2, 2), std::invalid_argument);
  EXPECT_THROW(synth_frame_stack(2, 2, 3, 4, 0.0, 1), std::invalid_argument);
}
