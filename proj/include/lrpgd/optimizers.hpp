#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lrpgd/measurements.hpp"
#include "lrpgd/types.hpp"

namespace lrpgd {

enum class MethodKind { GD, DecayPrecGD, PrecGD, ScaledGDLambda };

const char* method_name(MethodKind kind);
MethodKind parse_method(const std::string& name);

struct StepConfig {
  MethodKind method = MethodKind::DecayPrecGD;
  double alpha = 0.1;
  double beta = 0.5;                   // DecayPrecGD
  std::optional<double> eta0;          // DecayPrecGD; empty = sqrt(f(X0))
  std::optional<double> lambdaFixed;   // ScaledGDLambda
  std::optional<double> sigmaProxy;    // PrecGD
  std::size_t maxIters = 500;
  std::optional<double> gradTol;
  bool recordTiming = false;           // elapsed_ms is left empty otherwise
};

/// Throws std::invalid_argument when the hyperparameters do not fit the method.
void validate(const StepConfig& config);

struct TraceRecord {
  std::size_t iter = 0;
  double eta = 0.0;
  double f = 0.0;
  std::optional<double> fClean;
  std::optional<double> errFro;
  double gradFro = 0.0;
  std::optional<double> gradDualP;
  std::optional<double> elapsedMs;
};

enum class Termination { Budget, Tolerance, Divergence, Numerical };

const char* termination_name(Termination t);

struct RunResult {
  Iterate finalIterate;
  std::vector<TraceRecord> trace;
  Termination terminationReason = Termination::Budget;
  std::string detail;
};

// --- single steps ------------------------------------------------------------

/// X - alpha * grad.
template <typename Scalar>
Mat<Scalar> gd_step(const Mat<Scalar>& X, const Mat<Scalar>& grad, double alpha) {
  return X - alpha * grad;
}
FactorPair gd_step(const FactorPair& fp, const FactorPair& grad, double alpha);
Iterate gd_step(const Iterate& it, const Iterate& grad, double alpha);

/// X - alpha * grad (X^H X + eta I)^{-1}; for a factor pair U and V are
/// preconditioned by the Gram of the other factor, both taken before the
/// update. Throws DefinitenessError when the shifted Gram is singular.
MatrixXd precond_step(const MatrixXd& X, const MatrixXd& grad, double alpha, double eta);
MatrixXcd precond_step(const MatrixXcd& X, const MatrixXcd& grad, double alpha, double eta);
FactorPair precond_step(const FactorPair& fp, const FactorPair& grad, double alpha, double eta);
Iterate precond_step(const Iterate& it, const Iterate& grad, double alpha, double eta);

/// Regularization for iteration t given f(X_t):
///   DecayPrecGD     eta0 * beta^t
///   PrecGD          sqrt(|f - sigmaProxy^2|)
///   ScaledGDLambda  lambdaFixed
///   GD              0
double eta_schedule(const StepConfig& config, double eta0, std::size_t t, double fCurrent);

/// Runs config.maxIters steps of the configured rule from `init`, recording
/// iteration 0 and every step. Divergence (f non-finite or above 1e12 f(X0))
/// and definiteness failures end the run with the matching reason.
RunResult run(const MeasurementModel& model, const Iterate& init, const StepConfig& config);

}  // namespace lrpgd
