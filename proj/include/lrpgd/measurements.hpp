#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/SparseCore>

#include "lrpgd/types.hpp"

namespace lrpgd {

/// Linear sensing y_i = <A_i, M*> + eps_i with raw (unsymmetrized) A_i.
/// Row i of operatorRows holds vec(A_i) in column-major order, so that
/// A(M) = operatorRows * vec(M).
struct GaussianSensing {
  Index rows = 0;
  Index cols = 0;
  MatrixXd operatorRows;  // m x (rows*cols)
  VectorXd y;
  double sigma = 0.0;
  std::uint64_t seed = 0;

  Index count() const { return operatorRows.rows(); }
  MatrixXd matrix(Index i) const;
  /// [<A_1, M>, ..., <A_m, M>]
  VectorXd apply(const MatrixXd& M) const;
  /// sum_i w_i A_i
  MatrixXd adjoint(const VectorXd& w) const;
};

struct Entry {
  Index row;
  Index col;
  friend bool operator==(const Entry&, const Entry&) = default;
};

/// Observed entries of an n1 x n2 matrix. Entries are kept sorted by
/// (col, row), which lets the residual reuse a fixed compressed-column
/// pattern; use make_entry_sampling to build one.
struct EntrySampling {
  Index rows = 0;
  Index cols = 0;
  std::vector<Entry> omega;
  VectorXd yObs;  // yObs[k] observes omega[k]
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::vector<int> colStart;  // size cols + 1, offsets into omega

  Index count() const { return static_cast<Index>(omega.size()); }
};

/// Validates indices and uniqueness, sorts observations into column order.
EntrySampling make_entry_sampling(Index rows, Index cols, std::vector<Entry> omega, VectorXd y,
                                  double sigma = 0.0, std::uint64_t seed = 0);

struct OneBitData {
  MatrixXd alphaHat;  // empirical frequency of ones per entry, in [0, 1]
  std::int64_t trials = 1;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Phaseless measurements y_i = |<a_i, z>|^2 + eps_i. Column i of
/// `vectors` is a_i.
struct PhaseRetrievalData {
  MatrixXcd vectors;  // n x m
  VectorXd y;
  double sigma = 0.0;
  std::uint64_t seed = 0;

  Index count() const { return vectors.cols(); }
};

using MeasurementData = std::variant<GaussianSensing, EntrySampling, OneBitData, PhaseRetrievalData>;
using TruthRef = std::variant<std::monostate, GroundTruth<double>, GroundTruth<cdouble>>;

struct MeasurementModel {
  MeasurementData data;
  TruthRef truth;

  bool has_truth() const { return !std::holds_alternative<std::monostate>(truth); }
  const GroundTruth<double>& real_truth() const;
  const GroundTruth<cdouble>& complex_truth() const;
};

const char* family_name(const MeasurementData& data);

// --- ensembles -------------------------------------------------------------

/// m standard-Gaussian sensing matrices shaped like truth.mstar, with
/// observations <A_i, M*> + N(0, sigma^2).
GaussianSensing gaussian_ensemble(const GroundTruth<double>& truth, Index m, double sigma,
                                  std::uint64_t seed);

/// Samples ceil(rate * n1 * n2) distinct entries of `noisy`, observing
/// noisy(i, j) directly.
EntrySampling sample_entries(const MatrixXd& noisy, double rate, double sigma, std::uint64_t seed);

/// Per-entry noise eps_ij ~ N(0, sigma^2) drawn once; then `trials`
/// Bernoulli(sigmoid(M*_ij + eps_ij)) draws averaged into alphaHat.
OneBitData onebit_ensemble(const GroundTruth<double>& truth, std::int64_t trials, double sigma,
                           std::uint64_t seed);

/// m measurement vectors with standard normal real and imaginary parts.
PhaseRetrievalData phase_ensemble(const GroundTruth<cdouble>& truth, Index m, double sigma,
                                  std::uint64_t seed);

// --- losses and gradients ----------------------------------------------------

template <typename Grad>
struct LossGrad {
  double f = 0.0;
  Grad grad;
};

struct PairLossGrad {
  double f = 0.0;
  MatrixXd gradU;
  MatrixXd gradV;
};

double sigmoid(double s);

/// Gaussian sensing or one-bit loss at X X^T and its gradient in X.
LossGrad<MatrixXd> loss_and_grad_sym(const MeasurementModel& model, const MatrixXd& X);
LossGrad<MatrixXd> gaussian_loss_grad_sym(const GaussianSensing& gs, const MatrixXd& X);
LossGrad<MatrixXd> onebit_loss_grad(const OneBitData& data, const MatrixXd& X);

/// Gaussian sensing or entry sampling loss at U V^T with both factor gradients.
PairLossGrad loss_and_grad_asym(const MeasurementModel& model, const FactorPair& fp);
PairLossGrad gaussian_loss_grad_asym(const GaussianSensing& gs, const FactorPair& fp);
PairLossGrad completion_loss_grad(const EntrySampling& es, const FactorPair& fp);

/// E with E_ij = (2/|Omega|)((U V^T)_ij - y_ij) on Omega and zero elsewhere.
/// O(r |Omega|) time, O(|Omega|) memory.
Eigen::SparseMatrix<double> sparse_residual(const EntrySampling& es, const FactorPair& fp);

/// f = (1/m) sum (||X^H a_i||^2 - y_i)^2; grad = (4/m) sum r_i a_i (a_i^H X).
LossGrad<MatrixXcd> phase_loss_grad(const PhaseRetrievalData& data, const MatrixXcd& X);

/// Loss and gradient for whichever family the model holds. The gradient has
/// the same alternative as the iterate.
struct Evaluation {
  double f = 0.0;
  Iterate grad;
};
Evaluation evaluate(const MeasurementModel& model, const Iterate& iterate);

/// Copy of the model with observations replaced by their noiseless values
/// (alphaHat = sigmoid(M*) for one-bit). Throws MissingGroundTruth.
MeasurementModel clean_model(const MeasurementModel& model);

/// Loss of the iterate against noiseless observations.
double clean_loss(const MeasurementModel& model, const Iterate& iterate);

/// ||product(iterate) - M*||_F against the model's ground truth.
double fro_error(const MeasurementModel& model, const Iterate& iterate);

}  // namespace lrpgd
