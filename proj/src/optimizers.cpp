#include "lrpgd/optimizers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lrpgd/detail/overloaded.hpp"
#include "lrpgd/diagnostics.hpp"
#include "lrpgd/linalg.hpp"

namespace lrpgd {

using detail::Overloaded;

const char* method_name(MethodKind kind) {
  switch (kind) {
    case MethodKind::GD: return "GD";
    case MethodKind::DecayPrecGD: return "DecayPrecGD";
    case MethodKind::PrecGD: return "PrecGD";
    case MethodKind::ScaledGDLambda: return "ScaledGDLambda";
  }
  return "?";
}

MethodKind parse_method(const std::string& name) {
  for (MethodKind k : {MethodKind::GD, MethodKind::DecayPrecGD, MethodKind::PrecGD, MethodKind::ScaledGDLambda})
    if (name == method_name(k)) return k;
  throw std::invalid_argument("unknown method '" + name + "'");
}

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::Budget: return "budget";
    case Termination::Tolerance: return "tolerance";
    case Termination::Divergence: return "divergence";
    case Termination::Numerical: return "numerical";
  }
  return "?";
}

void validate(const StepConfig& c) {
  if (!(c.alpha >= 0.0) || !std::isfinite(c.alpha)) throw std::invalid_argument("alpha must be finite and >= 0");
  if (c.gradTol && !(*c.gradTol >= 0.0)) throw std::invalid_argument("gradTol must be >= 0");
  switch (c.method) {
    case MethodKind::DecayPrecGD:
      if (!(c.beta >= 0.0 && c.beta < 1.0)) throw std::invalid_argument("DecayPrecGD requires 0 <= beta < 1");
      if (c.eta0 && !(*c.eta0 >= 0.0)) throw std::invalid_argument("eta0 must be >= 0");
      break;
    case MethodKind::PrecGD:
      if (!c.sigmaProxy || !(*c.sigmaProxy >= 0.0))
        throw std::invalid_argument("PrecGD requires a nonnegative sigmaProxy");
      break;
    case MethodKind::ScaledGDLambda:
      if (!c.lambdaFixed || !(*c.lambdaFixed >= 0.0))
        throw std::invalid_argument("ScaledGDLambda requires a nonnegative lambdaFixed");
      break;
    case MethodKind::GD: break;
  }
}

// --- steps -------------------------------------------------------------------

FactorPair gd_step(const FactorPair& fp, const FactorPair& grad, double alpha) {
  return {fp.U - alpha * grad.U, fp.V - alpha * grad.V};
}

Iterate gd_step(const Iterate& it, const Iterate& grad, double alpha) {
  return std::visit(
      [&](const auto& x) -> Iterate {
        using T = std::decay_t<decltype(x)>;
        const auto& g = std::get<T>(grad);
        if constexpr (std::is_same_v<T, FactorPair>)
          return gd_step(x, g, alpha);
        else
          return T{gd_step(x.X, g.X, alpha)};
      },
      it);
}

MatrixXd precond_step(const MatrixXd& X, const MatrixXd& grad, double alpha, double eta) {
  return X - alpha * spd_solve(X.transpose() * X, eta, grad);
}

MatrixXcd precond_step(const MatrixXcd& X, const MatrixXcd& grad, double alpha, double eta) {
  return X - alpha * spd_solve(X.adjoint() * X, eta, grad);
}

FactorPair precond_step(const FactorPair& fp, const FactorPair& grad, double alpha, double eta) {
  const MatrixXd gramV = fp.V.transpose() * fp.V;
  const MatrixXd gramU = fp.U.transpose() * fp.U;
  return {fp.U - alpha * spd_solve(gramV, eta, grad.U), fp.V - alpha * spd_solve(gramU, eta, grad.V)};
}

Iterate precond_step(const Iterate& it, const Iterate& grad, double alpha, double eta) {
  return std::visit(
      [&](const auto& x) -> Iterate {
        using T = std::decay_t<decltype(x)>;
        const auto& g = std::get<T>(grad);
        if constexpr (std::is_same_v<T, FactorPair>)
          return precond_step(x, g, alpha, eta);
        else
          return T{precond_step(x.X, g.X, alpha, eta)};
      },
      it);
}

double eta_schedule(const StepConfig& config, double eta0, std::size_t t, double fCurrent) {
  switch (config.method) {
    case MethodKind::DecayPrecGD: {
      // Closed form in extended precision: one rounding instead of t.
      const long double decay = std::pow(static_cast<long double>(config.beta), static_cast<long double>(t));
      return static_cast<double>(static_cast<long double>(eta0) * decay);
    }
    case MethodKind::PrecGD: {
      const double s = config.sigmaProxy.value_or(0.0);
      return std::sqrt(std::abs(fCurrent - s * s));
    }
    case MethodKind::ScaledGDLambda: return config.lambdaFixed.value_or(0.0);
    case MethodKind::GD: return 0.0;
  }
  return 0.0;
}

// --- run loop ----------------------------------------------------------------

namespace {

double grad_fro(const Iterate& g) {
  return std::visit(Overloaded{
                        [](const FactorPair& fp) { return std::hypot(fp.U.norm(), fp.V.norm()); },
                        [](const auto& s) { return s.X.norm(); },
                    },
                    g);
}

}  // namespace

RunResult run(const MeasurementModel& model, const Iterate& init, const StepConfig& config) {
  validate(config);
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();

  const bool withTruth = model.has_truth();
  std::optional<MeasurementModel> clean;
  if (withTruth) clean = clean_model(model);

  RunResult result;
  result.finalIterate = init;
  Iterate& it = result.finalIterate;

  Evaluation eval = evaluate(model, it);
  const double f0 = eval.f;
  const double divergenceLevel = 1e12 * std::max(f0, std::numeric_limits<double>::epsilon());
  const double eta0 = config.eta0.value_or(std::sqrt(std::max(f0, 0.0)));

  for (std::size_t t = 0;; ++t) {
    const double eta = eta_schedule(config, eta0, t, eval.f);

    TraceRecord rec;
    rec.iter = t;
    rec.eta = eta;
    rec.f = eval.f;
    rec.gradFro = grad_fro(eval.grad);
    if (withTruth) {
      rec.fClean = evaluate(*clean, it).f;
      rec.errFro = fro_error(model, it);
    }
    try {
      rec.gradDualP = dual_p_norm(eval.grad, it, eta);
    } catch (const std::runtime_error&) {
      // Left empty when P is singular (GD with a rank-deficient Gram).
    }
    if (config.recordTiming)
      rec.elapsedMs = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    result.trace.push_back(rec);

    if (!std::isfinite(eval.f) || eval.f > divergenceLevel) {
      result.terminationReason = Termination::Divergence;
      result.detail = "loss left the finite range at iteration " + std::to_string(t);
      break;
    }
    if (config.gradTol && rec.gradFro <= *config.gradTol) {
      result.terminationReason = Termination::Tolerance;
      break;
    }
    if (t == config.maxIters) {
      result.terminationReason = Termination::Budget;
      break;
    }

    try {
      if (config.method == MethodKind::GD)
        it = gd_step(it, eval.grad, config.alpha);
      else
        it = precond_step(it, eval.grad, config.alpha, eta);
    } catch (const DefinitenessError& e) {
      result.terminationReason = Termination::Numerical;
      result.detail = e.what();
      break;
    }
    eval = evaluate(model, it);
  }
  return result;
}

}  // namespace lrpgd
