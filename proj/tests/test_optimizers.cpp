#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "lrpgd/diagnostics.hpp"
#include "lrpgd/ground_truth.hpp"
#include "lrpgd/init.hpp"
#include "lrpgd/optimizers.hpp"
#include "lrpgd/rng.hpp"
#include "lrpgd/scenarios.hpp"
#include "lrpgd/trace_io.hpp"
#include "oracles.hpp"

using namespace lrpgd;

namespace {

StepConfig config_for(MethodKind m, double alpha = 0.1, std::size_t iters = 50) {
  StepConfig c;
  c.method = m;
  c.alpha = alpha;
  c.maxIters = iters;
  if (m == MethodKind::PrecGD) c.sigmaProxy = 0.0;
  if (m == MethodKind::ScaledGDLambda) c.lambdaFixed = 1e-2;
  return c;
}

MeasurementModel small_gaussian(double sigma, std::uint64_t seed) {
  const auto gt = make_ground_truth(6, 2, 10, true, seed);
  return {gaussian_ensemble(gt, 72, sigma, seed + 1), gt};
}

}  // namespace

TEST(GdStep, ScalarArithmetic) {
  const MatrixXd X = MatrixXd::Ones(1, 1), g = MatrixXd::Constant(1, 1, -4.0);
  EXPECT_DOUBLE_EQ(gd_step(X, g, 0.1)(0, 0), 1.4);
}

TEST(GdStep, ZeroGradientOrZeroStepIsIdentity) {
  Rng rng(1);
  const MatrixXd X = rng.gaussian(5, 3), g = rng.gaussian(5, 3);
  EXPECT_EQ(gd_step(X, MatrixXd::Zero(5, 3).eval(), 0.3), X);
  EXPECT_EQ(gd_step(X, g, 0.0), X);
  const FactorPair fp{X, 2 * X}, gp{g, g};
  const FactorPair same = gd_step(fp, gp, 0.0);
  EXPECT_EQ(same.U, fp.U);
  EXPECT_EQ(same.V, fp.V);
}

TEST(PrecondStep, OriginIsStationaryForSensing) {
  const auto model = small_gaussian(0.0, 2);
  const Iterate X0 = SymFactor<double>{MatrixXd::Zero(6, 3)};
  const auto ev = evaluate(model, X0);
  EXPECT_EQ(std::get<SymFactor<double>>(ev.grad).X.norm(), 0.0);
  const Iterate X1 = precond_step(X0, ev.grad, 0.1, 1e-3);
  EXPECT_EQ(std::get<SymFactor<double>>(X1).X.norm(), 0.0);
}

TEST(PrecondStep, OrthonormalFactorMatchesGd) {
  const MatrixXd X = random_orthonormal(7, 3, 3);
  Rng rng(4);
  const MatrixXd g = rng.gaussian(7, 3);
  EXPECT_LE((precond_step(X, g, 0.2, 0.0) - gd_step(X, g, 0.2)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PrecondStep, IllConditionedGramMatchesExplicitInverse) {
  const MatrixXd Q = random_orthonormal(6, 2, 5);
  MatrixXd X = Q;
  X.col(0) *= 2.0;
  X.col(1) *= 1e-2;  // X^T X = diag(4, 1e-4)
  Rng rng(6);
  const MatrixXd g = rng.gaussian(6, 2);
  MatrixXd P(2, 2);
  P << 4.0001, 0, 0, 2e-4;
  const MatrixXd want = X - 0.1 * g * oracle::adjugate_inverse_2x2(P);
  const MatrixXd got = precond_step(X, g, 0.1, 1e-4);
  EXPECT_LE((got - want).norm(), 1e-12 * want.norm());
  EXPECT_NEAR((X - got)(0, 1) / (0.1 * g(0, 1)), 1.0 / 2e-4, 1e-6);
}

TEST(PrecondStep, PairUsesOppositeGramsBeforeUpdate) {
  Rng rng(7);
  const FactorPair fp{rng.gaussian(5, 2), rng.gaussian(4, 2)};
  const FactorPair g{rng.gaussian(5, 2), rng.gaussian(4, 2)};
  const double eta = 0.3;
  const MatrixXd PV = fp.V.transpose() * fp.V + eta * MatrixXd::Identity(2, 2);
  const MatrixXd PU = fp.U.transpose() * fp.U + eta * MatrixXd::Identity(2, 2);
  const FactorPair got = precond_step(fp, g, 0.5, eta);
  EXPECT_LE((got.U - (fp.U - 0.5 * g.U * oracle::adjugate_inverse_2x2(PV))).norm(), 1e-13);
  EXPECT_LE((got.V - (fp.V - 0.5 * g.V * oracle::adjugate_inverse_2x2(PU))).norm(), 1e-13);
}

TEST(PrecondStep, SingularGramThrows) {
  const MatrixXd X = MatrixXd::Zero(4, 2);
  EXPECT_THROW(precond_step(X, X, 0.1, 0.0), DefinitenessError);
}

TEST(EtaSchedule, GeometricDecay) {
  StepConfig c = config_for(MethodKind::DecayPrecGD);
  c.beta = 0.5;
  EXPECT_EQ(eta_schedule(c, 1.0, 3, 123.0), 0.125);
  EXPECT_EQ(eta_schedule(c, 2.0, 0, 123.0), 2.0);
}

TEST(EtaSchedule, OtherMethods) {
  StepConfig p = config_for(MethodKind::PrecGD);
  p.sigmaProxy = 0.25;
  EXPECT_EQ(eta_schedule(p, 0, 4, 0.0625), 0.0);
  EXPECT_DOUBLE_EQ(eta_schedule(p, 0, 4, 0.0625 + 0.01), 0.1);
  EXPECT_DOUBLE_EQ(eta_schedule(p, 0, 4, 0.0625 - 0.01), 0.1);
  StepConfig s = config_for(MethodKind::ScaledGDLambda);
  s.lambdaFixed = 3e-4;
  EXPECT_EQ(eta_schedule(s, 9, 7, 5), 3e-4);
  EXPECT_EQ(eta_schedule(config_for(MethodKind::GD), 9, 7, 5), 0.0);
}

TEST(Run, AutoEtaStartsAtRootLoss) {
  Scenario s = find_scenario("gauss-illcond-noiseless");
  const auto inst = instantiate(s);
  const Iterate X0 = initial_point(s, inst, s.init);
  StepConfig c = config_for(MethodKind::DecayPrecGD, 0.1, 5);
  c.beta = 0.85;
  const auto res = run(inst.model, X0, c);
  const double f0 = res.trace[0].f;
  EXPECT_EQ(res.trace[0].eta, std::sqrt(f0));
  EXPECT_DOUBLE_EQ(res.trace[1].eta, 0.85 * std::sqrt(f0));
  EXPECT_EQ(res.trace.size(), 6u);
}

TEST(Run, ExactFactorStaysAtZeroForEveryMethod) {
  const auto model = small_gaussian(0.0, 8);
  const Iterate exact = SymFactor<double>{model.real_truth().factorZ()};
  for (MethodKind m : {MethodKind::GD, MethodKind::DecayPrecGD, MethodKind::PrecGD, MethodKind::ScaledGDLambda}) {
    StepConfig c = config_for(m, 0.1, 20);
    if (m == MethodKind::DecayPrecGD) c.eta0 = 1.0;
    const auto res = run(model, exact, c);
    EXPECT_EQ(res.terminationReason, Termination::Budget) << method_name(m);
    for (const auto& rec : res.trace) ASSERT_LE(rec.f, 1e-28) << method_name(m);
  }
}

TEST(Run, NoiselessDecayPrecGdMonotoneAndCoupled) {
  Scenario s = find_scenario("gauss-illcond-noiseless");
  const auto inst = instantiate(s);
  const Iterate X0 = initial_point(s, inst, s.init);
  StepConfig c = config_for(MethodKind::DecayPrecGD, 0.1, 500);
  c.beta = 0.85;
  const auto res = run(inst.model, X0, c);
  double best = *res.trace[0].errFro;
  for (const auto& rec : res.trace) best = std::min(best, *rec.errFro);
  EXPECT_LE(best, 1e-9);
  const double floor = 1e-12;
  for (std::size_t t = 11; t < res.trace.size() && *res.trace[t - 1].errFro > floor; ++t)
    EXPECT_LT(*res.trace[t].errFro, *res.trace[t - 1].errFro) << "t=" << t;
  for (const auto& rec : res.trace) {
    if (*rec.errFro <= floor) break;
    EXPECT_LE(coupling_ratio(rec), 1e3) << "t=" << rec.iter;
  }
}

TEST(Run, GdDivergesWithHugeStep) {
  const auto model = small_gaussian(0.0, 9);
  const Iterate X0 = SymFactor<double>{small_init(6, 3, 1.0, 10)};
  const auto res = run(model, X0, config_for(MethodKind::GD, 50.0, 100));
  EXPECT_EQ(res.terminationReason, Termination::Divergence);
  EXPECT_FALSE(res.detail.empty());
  EXPECT_LT(res.trace.size(), 101u);
}

TEST(Run, SingularPreconditionerEndsRunNumerically) {
  const auto model = small_gaussian(0.0, 11);
  MatrixXd X = small_init(6, 3, 1.0, 12);
  X.col(2).setZero();
  StepConfig c = config_for(MethodKind::ScaledGDLambda);
  c.lambdaFixed = 0.0;
  const auto res = run(model, SymFactor<double>{X}, c);
  EXPECT_EQ(res.terminationReason, Termination::Numerical);
  EXPECT_EQ(res.trace.size(), 1u);
  EXPECT_FALSE(res.trace[0].gradDualP.has_value());
}

TEST(Run, GradientToleranceStopsEarly) {
  const auto model = small_gaussian(0.0, 13);
  StepConfig c = config_for(MethodKind::DecayPrecGD, 0.1, 1000);
  c.gradTol = 1e-6;
  const Iterate X0 = SymFactor<double>{spectral_oracle(model.real_truth(), 3, 0.1, 14)};
  const auto res = run(model, X0, c);
  EXPECT_EQ(res.terminationReason, Termination::Tolerance);
  EXPECT_LE(res.trace.back().gradFro, 1e-6);
}

TEST(Run, TimingOnlyWhenRequested) {
  const auto model = small_gaussian(0.0, 15);
  const Iterate X0 = SymFactor<double>{spectral_oracle(model.real_truth(), 3, 0.1, 16)};
  StepConfig c = config_for(MethodKind::DecayPrecGD, 0.1, 3);
  for (const auto& rec : run(model, X0, c).trace) EXPECT_FALSE(rec.elapsedMs);
  c.recordTiming = true;
  for (const auto& rec : run(model, X0, c).trace) EXPECT_TRUE(rec.elapsedMs);
}

TEST(Run, WithoutTruthLeavesDiagnosticsEmpty) {
  auto model = small_gaussian(0.0, 17);
  const Iterate X0 = SymFactor<double>{spectral_oracle(model.real_truth(), 3, 0.1, 18)};
  model.truth = std::monostate{};
  const auto res = run(model, X0, config_for(MethodKind::DecayPrecGD, 0.1, 2));
  EXPECT_FALSE(res.trace[1].errFro);
  EXPECT_FALSE(res.trace[1].fClean);
}

TEST(Validate, RejectsBadHyperparameters) {
  StepConfig c = config_for(MethodKind::DecayPrecGD);
  c.beta = 1.0;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = config_for(MethodKind::PrecGD);
  c.sigmaProxy.reset();
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = config_for(MethodKind::ScaledGDLambda);
  c.lambdaFixed = -1;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = config_for(MethodKind::GD, -0.1);
  EXPECT_THROW(validate(c), std::invalid_argument);
  EXPECT_NO_THROW(validate(config_for(MethodKind::GD)));
  EXPECT_THROW(parse_method("Adam"), std::invalid_argument);
  EXPECT_EQ(parse_method("ScaledGDLambda"), MethodKind::ScaledGDLambda);
}

TEST(TraceCsv, HeaderAndRoundTrip) {
  std::vector<TraceRecord> trace(2);
  trace[0] = {0, 0.5, 1.0 / 3.0, 0.25, 1e-310, 2.0, std::nullopt, std::nullopt};
  trace[1] = {1, 0.25, 1e-17, std::nullopt, std::nullopt, 0.1, 3.0, 12.5};
  std::stringstream ss;
  write_trace_csv(ss, trace);
  std::string header;
  std::getline(std::stringstream(ss.str()), header);
  EXPECT_EQ(header, kTraceHeader);
  EXPECT_NE(ss.str().find("0.33333333333333331"), std::string::npos);
  const auto back = read_trace_csv(ss);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].f, trace[0].f);
  EXPECT_EQ(back[0].errFro, trace[0].errFro);
  EXPECT_FALSE(back[0].gradDualP);
  EXPECT_EQ(back[1].iter, 1u);
  EXPECT_FALSE(back[1].fClean);
  EXPECT_EQ(back[1].elapsedMs, 12.5);
}

TEST(TraceCsv, RejectsForeignHeader) {
  std::stringstream ss("a,b\n1,2\n");
  EXPECT_THROW(read_trace_csv(ss), std::runtime_error);
}
