#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "lrpgd/measurements.hpp"
#include "lrpgd/optimizers.hpp"
#include "lrpgd/types.hpp"

namespace lrpgd {

// Local metric P = gram + eta I on n x r matrices, with gram = X^H X.
//
//   ||M||_P  = ||M P^{1/2}||_F        ||M||_P* = ||M P^{-1/2}||_F
//
// Both norms use the Frobenius norm on the right-scaled matrix. P^{+-1/2}
// come from the eigendecomposition of the r x r Hermitian gram.
template <typename Scalar>
struct PGeometry {
  Mat<Scalar> gram;
  double eta = 0.0;
};

template <typename Scalar>
PGeometry<Scalar> geometry_of(const Mat<Scalar>& X, double eta) {
  return {X.adjoint() * X, eta};
}

namespace detail {

// P^{power} for power = +-1/2.
template <typename Scalar>
Mat<Scalar> p_power(const PGeometry<Scalar>& geom, double power) {
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> eig(geom.gram);
  if (eig.info() != Eigen::Success) throw ConvergenceError("P-geometry eigendecomposition failed");
  const VectorXd shifted = eig.eigenvalues().array() + geom.eta;
  const double top = shifted.size() ? shifted.maxCoeff() : 0.0;
  const double floor = static_cast<double>(shifted.size()) * std::numeric_limits<double>::epsilon() * top;
  if (shifted.size() && (shifted.minCoeff() <= 0.0 || shifted.minCoeff() <= floor))
    throw DefinitenessError("P-geometry: gram + eta I is singular");
  const VectorXd scaled = shifted.array().pow(power);
  return eig.eigenvectors() * scaled.template cast<Scalar>().asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace detail

template <typename Scalar>
double p_norm(const Mat<Scalar>& M, const PGeometry<Scalar>& geom) {
  return (M * detail::p_power(geom, 0.5)).norm();
}

template <typename Scalar>
double dual_p_norm(const Mat<Scalar>& M, const PGeometry<Scalar>& geom) {
  return (M * detail::p_power(geom, -0.5)).norm();
}

/// Dual P-norm of a gradient at an iterate; for a factor pair the two blocks
/// use the Gram of the opposite factor and are combined in quadrature.
double dual_p_norm(const Iterate& grad, const Iterate& at, double eta);

/// ||grad f_c(X)||_P*^2 / f_c(X), measured against noiseless observations.
/// Throws std::domain_error when f_c(X) == 0.
double pl_ratio(const MeasurementModel& model, const MatrixXd& X, double eta);
double pl_ratio(const MeasurementModel& model, const MatrixXcd& X, double eta);

/// sqrt(fClean) / eta for one trace row.
double coupling_ratio(const TraceRecord& record);

/// sigma^2 n r ln(n) / m.
double minimax_level(double sigma, double n, double r, double m);

}  // namespace lrpgd
