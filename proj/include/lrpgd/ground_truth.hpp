#pragma once

#include <cstdint>

#include "lrpgd/types.hpp"

namespace lrpgd {

/// sigma_i = kappa^{-(i-1)/(r-1)} for i = 1..r; a single 1 when r == 1.
VectorXd log_spaced_spectrum(Index r, double kappa);

/// Random n x n rank-rStar target M* = Q diag(spectrum) S^T with log-spaced
/// spectrum from 1 down to 1/kappa. Q (and S, when asymmetric) come from the
/// QR factorization of a standard Gaussian draw; the symmetric variant uses
/// S = Q, so M* is PSD and factorZ = Q diag(spectrum)^{1/2}.
GroundTruth<double> make_ground_truth(Index n, Index rStar, double kappa, bool symmetric,
                                      std::uint64_t seed);

/// Assembles a target from orthonormal factors and a nonincreasing spectrum.
GroundTruth<double> ground_truth_from_factors(const MatrixXd& Q, const VectorXd& spectrum,
                                              const MatrixXd& S);

/// Rank-one complex target M* = z z^H with Re z, Im z standard normal.
GroundTruth<cdouble> make_phase_truth(Index n, std::uint64_t seed);

/// First r columns of the QR factor of a Gaussian rows x r draw.
MatrixXd random_orthonormal(Index rows, Index r, std::uint64_t seed);

}  // namespace lrpgd
