#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include "lrpgd/types.hpp"

namespace lrpgd {

template <typename Scalar>
struct TruncatedSvd {
  Mat<Scalar> Q;     // rows x r, orthonormal columns
  VectorXd sigma;    // r values, nonincreasing
  Mat<Scalar> S;     // cols x r, orthonormal columns
};

// Top-r singular triplets. Backed by Eigen's bidiagonal divide-and-conquer
// SVD (thin factors); its QR sweeps are capped internally by Eigen, and a
// non-converged decomposition is reported as ConvergenceError.
template <typename Derived>
TruncatedSvd<typename Derived::Scalar> svd_top_r(const Eigen::MatrixBase<Derived>& M, Index r) {
  using Scalar = typename Derived::Scalar;
  if (r < 0 || r > std::min(M.rows(), M.cols()))
    throw std::invalid_argument("svd_top_r: r exceeds min(rows, cols)");
  Eigen::BDCSVD<Mat<Scalar>> svd(M.derived(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success)
    throw ConvergenceError("svd_top_r: singular value decomposition did not converge");
  TruncatedSvd<Scalar> out;
  out.Q = svd.matrixU().leftCols(r);
  out.sigma = svd.singularValues().head(r);
  out.S = svd.matrixV().leftCols(r);
  return out;
}

/// Returns B (G + eta I)^{-1} for Hermitian G, via Cholesky of G + eta I.
/// Throws DefinitenessError on a nonpositive pivot.
template <typename DerivedG, typename DerivedB>
Mat<typename DerivedB::Scalar> spd_solve(const Eigen::MatrixBase<DerivedG>& G, double eta,
                                         const Eigen::MatrixBase<DerivedB>& B) {
  using Scalar = typename DerivedB::Scalar;
  if (G.rows() != G.cols() || G.cols() != B.cols())
    throw std::invalid_argument("spd_solve: shape mismatch");
  Mat<Scalar> shifted = G.template cast<Scalar>();
  shifted.diagonal().array() += Scalar(eta);
  Eigen::LLT<Mat<Scalar>> llt(shifted);
  if (llt.info() != Eigen::Success)
    throw DefinitenessError("spd_solve: G + eta*I is not positive definite");
  // Y H = B  <=>  H Y^H = B^H for Hermitian H.
  return llt.solve(B.adjoint()).adjoint();
}

template <typename Derived>
double fro_norm(const Eigen::MatrixBase<Derived>& M) {
  return M.norm();
}

template <typename Derived>
double spectral_norm(const Eigen::MatrixBase<Derived>& M) {
  if (M.size() == 0) return 0.0;
  Eigen::BDCSVD<Mat<typename Derived::Scalar>> svd(M.derived());
  return svd.singularValues()(0);
}

/// ||X X^H - M*||_F.
template <typename Scalar>
double fro_error(const Mat<Scalar>& X, const GroundTruth<Scalar>& truth) {
  if (X.rows() != truth.mstar.rows() || truth.mstar.rows() != truth.mstar.cols())
    throw std::invalid_argument("fro_error: shape mismatch");
  return (X * X.adjoint() - truth.mstar).norm();
}

/// ||U V^T - M*||_F.
inline double fro_error(const FactorPair& fp, const GroundTruth<double>& truth) {
  if (fp.U.rows() != truth.mstar.rows() || fp.V.rows() != truth.mstar.cols() ||
      fp.U.cols() != fp.V.cols())
    throw std::invalid_argument("fro_error: shape mismatch");
  return (fp.U * fp.V.transpose() - truth.mstar).norm();
}

}  // namespace lrpgd
