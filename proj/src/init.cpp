#include "lrpgd/init.hpp"

#include <algorithm>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "lrpgd/linalg.hpp"
#include "lrpgd/rng.hpp"

namespace lrpgd {

namespace {

template <typename Scalar>
Mat<Scalar> padded(const Mat<Scalar>& factor, Index r) {
  Mat<Scalar> out = Mat<Scalar>::Zero(factor.rows(), r);
  const Index keep = std::min(r, factor.cols());
  out.leftCols(keep) = factor.leftCols(keep);
  return out;
}

void require_rank(Index r) {
  if (r < 1) throw std::invalid_argument("initializer: search rank must be >= 1");
}

}  // namespace

MatrixXd spectral_oracle(const GroundTruth<double>& truth, Index r, double perturbScale,
                         std::uint64_t seed) {
  require_rank(r);
  Rng rng(seed);
  MatrixXd X = padded(truth.factorZ(), r);
  if (perturbScale != 0.0) X += perturbScale * rng.gaussian(X.rows(), r);
  return X;
}

MatrixXcd spectral_oracle(const GroundTruth<cdouble>& truth, Index r, double perturbScale,
                          std::uint64_t seed) {
  require_rank(r);
  Rng rng(seed);
  MatrixXcd X = padded(truth.factorZ(), r);
  if (perturbScale != 0.0) X += perturbScale * rng.complex_gaussian(X.rows(), r);
  return X;
}

FactorPair spectral_oracle_pair(const GroundTruth<double>& truth, Index r, double perturbScale,
                                std::uint64_t seed) {
  require_rank(r);
  Rng rng(seed);
  FactorPair fp{padded(truth.left, r), padded(truth.right, r)};
  if (perturbScale != 0.0) {
    fp.U += perturbScale * rng.gaussian(fp.U.rows(), r);
    fp.V += perturbScale * rng.gaussian(fp.V.rows(), r);
  }
  return fp;
}

Iterate spectral_data(const MeasurementModel& model, Index r) {
  require_rank(r);
  if (const auto* gs = std::get_if<GaussianSensing>(&model.data)) {
    if (gs->rows != gs->cols) throw std::invalid_argument("spectral_data: gaussian sensing must be square");
    if (r > gs->rows) throw std::invalid_argument("spectral_data: r exceeds n");
    const MatrixXd G = gs->adjoint(gs->y) / static_cast<double>(gs->count());
    const MatrixXd S = 0.5 * (G + G.transpose());
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(S);
    if (eig.info() != Eigen::Success) throw ConvergenceError("spectral_data: eigensolver failed");
    // Eigen orders eigenvalues ascending; take the top r.
    const Index n = S.rows();
    MatrixXd X(n, r);
    for (Index k = 0; k < r; ++k) {
      const Index src = n - 1 - k;
      X.col(k) = eig.eigenvectors().col(src) * std::sqrt(std::max(eig.eigenvalues()(src), 0.0));
    }
    return SymFactor<double>{std::move(X)};
  }
  if (const auto* es = std::get_if<EntrySampling>(&model.data)) {
    if (es->count() == 0) throw std::invalid_argument("spectral_data: no observed entries");
    const double p = static_cast<double>(es->count()) / static_cast<double>(es->rows * es->cols);
    MatrixXd Y = MatrixXd::Zero(es->rows, es->cols);
    for (Index k = 0; k < es->count(); ++k) Y(es->omega[k].row, es->omega[k].col) = es->yObs(k) / p;
    const auto svd = svd_top_r(Y, r);
    const VectorXd root = svd.sigma.cwiseSqrt();
    return FactorPair{svd.Q * root.asDiagonal(), svd.S * root.asDiagonal()};
  }
  throw std::invalid_argument(std::string("spectral_data: no spectral surrogate for ") + family_name(model.data));
}

MatrixXd small_init(Index n, Index r, double scale, std::uint64_t seed) {
  require_rank(r);
  if (!(scale > 0.0)) throw std::invalid_argument("small_init: scale must be positive");
  Rng rng(seed);
  return scale * rng.gaussian(n, r);
}

}  // namespace lrpgd
