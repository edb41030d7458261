#pragma once

#include <cstdint>

#include "lrpgd/measurements.hpp"
#include "lrpgd/types.hpp"

namespace lrpgd {

// Oracle spectral start: X0 = [Q Sigma^{1/2}, 0] + perturbScale * G with the
// true factor zero-padded (or truncated) to r columns and G an n x r standard
// Gaussian draw (complex draws have independent real and imaginary parts).
MatrixXd spectral_oracle(const GroundTruth<double>& truth, Index r, double perturbScale,
                         std::uint64_t seed);
MatrixXcd spectral_oracle(const GroundTruth<cdouble>& truth, Index r, double perturbScale,
                          std::uint64_t seed);
/// Same recipe applied to the left and right factors of an asymmetric target.
FactorPair spectral_oracle_pair(const GroundTruth<double>& truth, Index r, double perturbScale,
                                std::uint64_t seed);

inline constexpr double kDefaultPerturbScale = 0.1;

// Data-driven spectral start, deterministic in the model:
//  - gaussian sensing: top-r eigenpairs of (1/m) sum y_i (A_i + A_i^T)/2,
//    eigenvalues clamped at zero, X0 = Q max(Lambda, 0)^{1/2};
//  - entry sampling: top-r SVD of (1/p) P_Omega(Y) with p = |Omega|/(n1 n2),
//    U0 = Q Sigma^{1/2}, V0 = S Sigma^{1/2}.
// Other families are rejected with std::invalid_argument.
Iterate spectral_data(const MeasurementModel& model, Index r);

/// X0 = scale * G with G an n x r standard Gaussian draw.
MatrixXd small_init(Index n, Index r, double scale, std::uint64_t seed);

}  // namespace lrpgd
