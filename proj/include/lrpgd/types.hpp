#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

#include <Eigen/Dense>

namespace lrpgd {

using Index = Eigen::Index;
using cdouble = std::complex<double>;

// Dense storage is Eigen's default column-major layout. Everything that
// leaves the process (text matrices, traces, ensembles) is written row by row.
template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Mat<double>;
using MatrixXcd = Mat<cdouble>;
using VectorXd = Vec<double>;
using VectorXcd = Vec<cdouble>;

/// Symmetric factorization M = X X^H with X of shape n x r. No relation
/// between n and r is imposed.
template <typename Scalar>
struct SymFactor {
  Mat<Scalar> X;

  Index rank() const { return X.cols(); }
};

/// Asymmetric factorization M = U V^T.
struct FactorPair {
  MatrixXd U;
  MatrixXd V;

  Index rank() const { return U.cols(); }
};

/// The optimization variable for every measurement family. Gradients use the
/// same representation as the iterate they belong to.
using Iterate = std::variant<SymFactor<double>, SymFactor<cdouble>, FactorPair>;

/// Low-rank target with known factors: mstar = left * right^H. For the
/// symmetric case left == right and mstar is Hermitian PSD.
template <typename Scalar>
struct GroundTruth {
  Mat<Scalar> mstar;
  Mat<Scalar> left;
  Mat<Scalar> right;
  VectorXd spectrum;  // nonincreasing, length trueRank
  Index trueRank = 0;
  double conditionNumber = 1.0;
  bool symmetric = true;

  const Mat<Scalar>& factorZ() const { return left; }
};

class DefinitenessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MissingGroundTruth : public std::logic_error {
 public:
  MissingGroundTruth() : std::logic_error("measurement model carries no ground truth") {}
};

}  // namespace lrpgd
