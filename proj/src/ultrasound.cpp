#include "lrpgd/ultrasound.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/QR>

#include "lrpgd/ground_truth.hpp"
#include "lrpgd/init.hpp"
#include "lrpgd/linalg.hpp"
#include "lrpgd/rng.hpp"

namespace lrpgd {

namespace {

MatrixXd orthonormal_columns(const MatrixXd& A) {
  Eigen::HouseholderQR<MatrixXd> qr(A);
  return qr.householderQ() * MatrixXd::Identity(A.rows(), A.cols());
}

}  // namespace

FrameStack stack_from_space_time(MatrixXd spaceTime, Index h, Index w) {
  if (h < 1 || w < 1 || spaceTime.rows() != h * w)
    throw std::invalid_argument("frame stack: space-time rows must equal h * w");
  return FrameStack{h, w, std::move(spaceTime)};
}

SynthStack synth_frame_stack(Index h, Index w, Index frames, Index rank, double sigma, std::uint64_t seed) {
  if (h < 1 || w < 1 || frames < 1) throw std::invalid_argument("synth_frame_stack: empty dimensions");
  if (rank < 1 || rank > std::min(h * w, frames))
    throw std::invalid_argument("synth_frame_stack: rank exceeds min(h*w, frames)");
  if (sigma < 0) throw std::invalid_argument("synth_frame_stack: sigma must be nonnegative");

  Rng spatial(derive_seed(seed, 0));
  const double side = static_cast<double>(std::min(h, w));
  MatrixXd blobs(h * w, rank);
  for (Index k = 0; k < rank; ++k) {
    const double ci = spatial.uniform() * static_cast<double>(h);
    const double cj = spatial.uniform() * static_cast<double>(w);
    const double width = side * (0.05 + 0.15 * spatial.uniform());
    for (Index j = 0; j < w; ++j)
      for (Index i = 0; i < h; ++i) {
        const double d2 = (i - ci) * (i - ci) + (j - cj) * (j - cj);
        blobs(i + h * j, k) = std::exp(-0.5 * d2 / (width * width));
      }
  }

  Rng temporal(derive_seed(seed, 1));
  MatrixXd waves(frames, rank);
  for (Index k = 0; k < rank; ++k) {
    const double cycles = 0.5 + 3.5 * temporal.uniform();
    const double phase = 2.0 * std::numbers::pi * temporal.uniform();
    for (Index t = 0; t < frames; ++t)
      waves(t, k) = std::sin(2.0 * std::numbers::pi * cycles * static_cast<double>(t) / frames + phase);
  }

  const double scale = std::sqrt(static_cast<double>(h * w * frames));
  const VectorXd spectrum = scale * log_spaced_spectrum(rank, kSynthKappa);
  SynthStack out;
  out.truth = ground_truth_from_factors(orthonormal_columns(blobs), spectrum, orthonormal_columns(waves));

  MatrixXd noisy = out.truth.mstar;
  if (sigma > 0) {
    Rng noise(derive_seed(seed, 2));
    noisy += sigma * noise.gaussian(noisy.rows(), noisy.cols());
  }
  out.noisy = stack_from_space_time(std::move(noisy), h, w);
  return out;
}

double sigma_for_snr(const MatrixXd& clean, double snrDb) {
  if (clean.size() == 0) throw std::invalid_argument("sigma_for_snr: empty matrix");
  return clean.norm() / std::sqrt(static_cast<double>(clean.size())) * std::pow(10.0, -snrDb / 20.0);
}

DenoiseResult denoise_pipeline(const FrameStack& stack, Index r, double samplingRate, const StepConfig& config,
                               std::uint64_t seed, const std::optional<GroundTruth<double>>& truth) {
  MeasurementModel model;
  model.data = sample_entries(stack.spaceTime, samplingRate, 0.0, seed);
  if (truth) model.truth = *truth;
  const Iterate init = spectral_data(model, r);
  DenoiseResult out;
  out.run = run(model, init, config);
  const auto& fp = std::get<FactorPair>(out.run.finalIterate);
  out.denoised = stack_from_space_time(fp.U * fp.V.transpose(), stack.h, stack.w);
  return out;
}

FrameStack truncated_svd_denoise(const FrameStack& stack, Index r) {
  const auto svd = svd_top_r(stack.spaceTime, r);
  return stack_from_space_time(svd.Q * svd.sigma.asDiagonal() * svd.S.transpose(), stack.h, stack.w);
}

MatrixXd power_doppler(const FrameStack& stack) {
  if (stack.frame_count() < 1) throw std::invalid_argument("power_doppler: need at least one frame");
  const VectorXd s = stack.spaceTime.rowwise().squaredNorm();
  const double top = s.maxCoeff();
  VectorXd db = VectorXd::Zero(s.size());
  if (top > 0) {
    double lowest = std::numeric_limits<double>::infinity();
    for (Index p = 0; p < s.size(); ++p)
      if (s(p) > 0) {
        db(p) = 20.0 * std::log10(s(p) / top);
        lowest = std::min(lowest, db(p));
      }
    for (Index p = 0; p < s.size(); ++p)
      if (!(s(p) > 0)) db(p) = lowest - 60.0;
  }
  return db.reshaped(stack.h, stack.w);
}

}  // namespace lrpgd
