#include "lrpgd/ground_truth.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/QR>

#include "lrpgd/rng.hpp"

namespace lrpgd {

VectorXd log_spaced_spectrum(Index r, double kappa) {
  VectorXd s(r);
  if (r == 1) {
    s(0) = 1.0;
    return s;
  }
  for (Index i = 0; i < r; ++i)
    s(i) = std::pow(kappa, -static_cast<double>(i) / static_cast<double>(r - 1));
  return s;
}

MatrixXd random_orthonormal(Index rows, Index r, std::uint64_t seed) {
  Rng rng(seed);
  const MatrixXd draw = rng.gaussian(rows, r);
  Eigen::HouseholderQR<MatrixXd> qr(draw);
  return qr.householderQ() * MatrixXd::Identity(rows, r);
}

GroundTruth<double> ground_truth_from_factors(const MatrixXd& Q, const VectorXd& spectrum,
                                              const MatrixXd& S) {
  const Index r = spectrum.size();
  if (Q.cols() != r || S.cols() != r)
    throw std::invalid_argument("ground_truth_from_factors: factor/spectrum size mismatch");
  if (r < 1) throw std::invalid_argument("ground_truth_from_factors: empty spectrum");
  const VectorXd root = spectrum.cwiseSqrt();
  GroundTruth<double> gt;
  gt.left = Q * root.asDiagonal();
  gt.right = S * root.asDiagonal();
  gt.mstar = Q * spectrum.asDiagonal() * S.transpose();
  gt.spectrum = spectrum;
  gt.trueRank = r;
  gt.conditionNumber = spectrum(0) / spectrum(r - 1);
  gt.symmetric = (&Q == &S) || (Q.rows() == S.rows() && Q == S);
  return gt;
}

GroundTruth<double> make_ground_truth(Index n, Index rStar, double kappa, bool symmetric,
                                      std::uint64_t seed) {
  if (rStar < 1 || rStar > n) throw std::invalid_argument("make_ground_truth: need 1 <= rStar <= n");
  if (!(kappa >= 1.0)) throw std::invalid_argument("make_ground_truth: kappa must be >= 1");
  const VectorXd spectrum = log_spaced_spectrum(rStar, kappa);
  const MatrixXd Q = random_orthonormal(n, rStar, derive_seed(seed, 0));
  GroundTruth<double> gt;
  if (symmetric) {
    gt = ground_truth_from_factors(Q, spectrum, Q);
    // Exact symmetry regardless of product rounding.
    gt.mstar = 0.5 * (gt.mstar + gt.mstar.transpose()).eval();
  } else {
    const MatrixXd S = random_orthonormal(n, rStar, derive_seed(seed, 1));
    gt = ground_truth_from_factors(Q, spectrum, S);
    gt.symmetric = false;
  }
  gt.conditionNumber = kappa;
  return gt;
}

GroundTruth<cdouble> make_phase_truth(Index n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("make_phase_truth: n must be positive");
  Rng rng(seed);
  GroundTruth<cdouble> gt;
  gt.left = rng.complex_gaussian(n, 1);
  gt.right = gt.left;
  gt.mstar = gt.left * gt.left.adjoint();
  gt.spectrum = VectorXd::Constant(1, gt.left.squaredNorm());
  gt.trueRank = 1;
  gt.conditionNumber = 1.0;
  gt.symmetric = true;
  return gt;
}

}  // namespace lrpgd
