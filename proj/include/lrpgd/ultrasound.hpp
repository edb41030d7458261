#pragma once

#include <cstdint>
#include <optional>

#include "lrpgd/measurements.hpp"
#include "lrpgd/optimizers.hpp"
#include "lrpgd/types.hpp"

namespace lrpgd {

/// A stack of T real h x w frames held as the (h*w) x T space-time matrix.
/// Column k is frame k flattened by stacking its columns, so pixel (i, j)
/// sits at row i + h*j.
struct FrameStack {
  Index h = 0;
  Index w = 0;
  MatrixXd spaceTime;

  Index frame_count() const { return spaceTime.cols(); }
  MatrixXd frame(Index k) const { return spaceTime.col(k).reshaped(h, w); }
};

FrameStack stack_from_space_time(MatrixXd spaceTime, Index h, Index w);

struct SynthStack {
  FrameStack noisy;
  GroundTruth<double> truth;  // the clean space-time matrix and its factors
};

// Rank-`rank` synthetic clip M* = Q diag(s) S^T:
//  - Q: isotropic Gaussian blobs on the h x w grid, orthonormalized;
//  - S: low-frequency sinusoids over the T frames, orthonormalized;
//  - s: log-spaced from sqrt(h w T) down by a factor kSynthKappa.
// Every entry then receives N(0, sigma^2) noise.
inline constexpr double kSynthKappa = 10.0;

// Completion step sizes per observed-matrix entry, alpha = c * n1 * n2. The
// loss carries a 1/|Omega| factor, so alpha has to grow with the matrix.
inline constexpr double kCompletionAlphaPerEntry = 0.16;
inline constexpr double kCompletionGdAlphaPerEntry = 1.6e-5;
SynthStack synth_frame_stack(Index h, Index w, Index frames, Index rank, double sigma, std::uint64_t seed);

/// Noise level giving the requested input SNR, 10 log10(||M||^2 / (N sigma^2)).
double sigma_for_snr(const MatrixXd& clean, double snrDb);

struct DenoiseResult {
  FrameStack denoised;
  RunResult run;
};

/// Samples ceil(rate * N) entries of the stack, starts from the spectral
/// estimate of the sampled matrix and runs the asymmetric completion
/// iteration. With a truth the trace also carries clean loss and errors.
DenoiseResult denoise_pipeline(const FrameStack& stack, Index r, double samplingRate, const StepConfig& config,
                               std::uint64_t seed, const std::optional<GroundTruth<double>>& truth = std::nullopt);

/// Rank-r truncated SVD of the space-time matrix.
FrameStack truncated_svd_denoise(const FrameStack& stack, Index r);

/// 20 log10(s / max s) per pixel with s the sum of squares over frames.
/// Zero pixels are set 60 dB below the smallest finite value; an all-zero
/// stack maps to an all-zero image.
MatrixXd power_doppler(const FrameStack& stack);

}  // namespace lrpgd
