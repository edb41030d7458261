#include "lrpgd/measurements.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lrpgd/detail/overloaded.hpp"
#include "lrpgd/linalg.hpp"
#include "lrpgd/rng.hpp"

namespace lrpgd {

namespace {

using detail::Overloaded;

constexpr double kLogFloor = 1e-300;

void require_shape(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// Residuals (U V^T)_ij - y_ij over Omega in storage order.
VectorXd completion_residuals(const EntrySampling& es, const FactorPair& fp) {
  require_shape(fp.U.rows() == es.rows && fp.V.rows() == es.cols && fp.U.cols() == fp.V.cols(),
                "completion: factor shapes do not match the sampled matrix");
  const MatrixXd Ut = fp.U.transpose();
  const MatrixXd Vt = fp.V.transpose();
  VectorXd res(es.count());
  for (Index k = 0; k < es.count(); ++k) {
    const Entry& e = es.omega[k];
    res(k) = Ut.col(e.row).dot(Vt.col(e.col)) - es.yObs(k);
  }
  return res;
}

Eigen::SparseMatrix<double> assemble_residual(const EntrySampling& es, const VectorXd& values) {
  Eigen::SparseMatrix<double> E(es.rows, es.cols);
  const Index nnz = es.count();
  E.resizeNonZeros(nnz);
  std::copy(es.colStart.begin(), es.colStart.end(), E.outerIndexPtr());
  int* inner = E.innerIndexPtr();
  double* vals = E.valuePtr();
  for (Index k = 0; k < nnz; ++k) {
    inner[k] = static_cast<int>(es.omega[k].row);
    vals[k] = values(k);
  }
  return E;
}

}  // namespace

// --- GaussianSensing -------------------------------------------------------

MatrixXd GaussianSensing::matrix(Index i) const {
  return operatorRows.row(i).reshaped(rows, cols);
}

VectorXd GaussianSensing::apply(const MatrixXd& M) const {
  require_shape(M.rows() == rows && M.cols() == cols, "GaussianSensing::apply: shape mismatch");
  return operatorRows * M.reshaped();
}

MatrixXd GaussianSensing::adjoint(const VectorXd& w) const {
  require_shape(w.size() == count(), "GaussianSensing::adjoint: length mismatch");
  const VectorXd flat = operatorRows.transpose() * w;
  return flat.reshaped(rows, cols);
}

// --- model accessors -------------------------------------------------------

const GroundTruth<double>& MeasurementModel::real_truth() const {
  if (const auto* gt = std::get_if<GroundTruth<double>>(&truth)) return *gt;
  throw MissingGroundTruth();
}

const GroundTruth<cdouble>& MeasurementModel::complex_truth() const {
  if (const auto* gt = std::get_if<GroundTruth<cdouble>>(&truth)) return *gt;
  throw MissingGroundTruth();
}

const char* family_name(const MeasurementData& data) {
  return std::visit(Overloaded{
                        [](const GaussianSensing&) { return "gaussian-sensing"; },
                        [](const EntrySampling&) { return "entry-sampling"; },
                        [](const OneBitData&) { return "one-bit"; },
                        [](const PhaseRetrievalData&) { return "phase-retrieval"; },
                    },
                    data);
}

// --- ensembles -------------------------------------------------------------

GaussianSensing gaussian_ensemble(const GroundTruth<double>& truth, Index m, double sigma,
                                  std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("gaussian_ensemble: need m >= 1");
  if (sigma < 0) throw std::invalid_argument("gaussian_ensemble: sigma must be nonnegative");
  GaussianSensing gs;
  gs.rows = truth.mstar.rows();
  gs.cols = truth.mstar.cols();
  gs.sigma = sigma;
  gs.seed = seed;
  gs.operatorRows.resize(m, gs.rows * gs.cols);
  Rng rng(seed);
  for (Index i = 0; i < m; ++i) {
    // Draw A_i row-major, store column-major vec.
    MatrixXd A = rng.gaussian(gs.rows, gs.cols);
    gs.operatorRows.row(i) = A.reshaped().transpose();
  }
  gs.y = gs.apply(truth.mstar);
  if (sigma > 0)
    for (Index i = 0; i < m; ++i) gs.y(i) += sigma * rng.normal();
  return gs;
}

EntrySampling make_entry_sampling(Index rows, Index cols, std::vector<Entry> omega, VectorXd y,
                                  double sigma, std::uint64_t seed) {
  if (static_cast<Index>(omega.size()) != y.size())
    throw std::invalid_argument("make_entry_sampling: one observation per entry required");
  for (const Entry& e : omega)
    if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols)
      throw std::invalid_argument("make_entry_sampling: index out of range");

  std::vector<Index> order(omega.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<Index>(k);
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    const Entry& ea = omega[a];
    const Entry& eb = omega[b];
    return ea.col != eb.col ? ea.col < eb.col : ea.row < eb.row;
  });

  EntrySampling es;
  es.rows = rows;
  es.cols = cols;
  es.sigma = sigma;
  es.seed = seed;
  es.omega.reserve(omega.size());
  es.yObs.resize(y.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Entry& e = omega[order[k]];
    if (!es.omega.empty() && es.omega.back() == e)
      throw std::invalid_argument("make_entry_sampling: repeated entry");
    es.omega.push_back(e);
    es.yObs(static_cast<Index>(k)) = y(order[k]);
  }
  es.colStart.assign(cols + 1, 0);
  for (const Entry& e : es.omega) ++es.colStart[e.col + 1];
  for (Index j = 0; j < cols; ++j) es.colStart[j + 1] += es.colStart[j];
  return es;
}

EntrySampling sample_entries(const MatrixXd& noisy, double rate, double sigma, std::uint64_t seed) {
  if (!(rate > 0.0 && rate <= 1.0)) throw std::invalid_argument("sample_entries: rate must be in (0, 1]");
  const auto total = static_cast<std::uint64_t>(noisy.size());
  // The epsilon keeps exact products like 0.45 * 400000 from rounding up.
  auto k = static_cast<std::uint64_t>(std::ceil(rate * static_cast<double>(total) - 1e-9));
  k = std::clamp<std::uint64_t>(k, 1, total);
  Rng rng(seed);
  const auto picks = rng.sample_without_replacement(total, k);
  std::vector<Entry> omega;
  omega.reserve(k);
  VectorXd y(static_cast<Index>(k));
  for (std::uint64_t t = 0; t < k; ++t) {
    const auto lin = static_cast<Index>(picks[t]);
    const Entry e{lin % noisy.rows(), lin / noisy.rows()};
    omega.push_back(e);
    y(static_cast<Index>(t)) = noisy(e.row, e.col);
  }
  return make_entry_sampling(noisy.rows(), noisy.cols(), std::move(omega), std::move(y), sigma, seed);
}

double sigmoid(double s) {
  if (s >= 0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

OneBitData onebit_ensemble(const GroundTruth<double>& truth, std::int64_t trials, double sigma,
                           std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("onebit_ensemble: need trials >= 1");
  if (sigma < 0) throw std::invalid_argument("onebit_ensemble: sigma must be nonnegative");
  OneBitData data;
  data.trials = trials;
  data.sigma = sigma;
  data.seed = seed;
  const MatrixXd& M = truth.mstar;
  data.alphaHat.resize(M.rows(), M.cols());
  Rng rng(seed);
  for (Index i = 0; i < M.rows(); ++i)
    for (Index j = 0; j < M.cols(); ++j) {
      const double eps = sigma > 0 ? sigma * rng.normal() : 0.0;
      const double p = sigmoid(M(i, j) + eps);
      std::int64_t ones = 0;
      for (std::int64_t k = 0; k < trials; ++k) ones += rng.uniform() < p;
      data.alphaHat(i, j) = static_cast<double>(ones) / static_cast<double>(trials);
    }
  return data;
}

PhaseRetrievalData phase_ensemble(const GroundTruth<cdouble>& truth, Index m, double sigma,
                                  std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("phase_ensemble: need m >= 1");
  PhaseRetrievalData data;
  data.sigma = sigma;
  data.seed = seed;
  Rng rng(seed);
  // Column i is a_i: draw each vector contiguously.
  data.vectors = rng.complex_gaussian(m, truth.left.rows()).transpose();
  const MatrixXcd W = data.vectors.adjoint() * truth.left;
  data.y = W.rowwise().squaredNorm();
  if (sigma > 0)
    for (Index i = 0; i < m; ++i) data.y(i) += sigma * rng.normal();
  return data;
}

// --- losses ----------------------------------------------------------------

LossGrad<MatrixXd> gaussian_loss_grad_sym(const GaussianSensing& gs, const MatrixXd& X) {
  require_shape(gs.rows == gs.cols && X.rows() == gs.rows, "gaussian sensing: X has wrong row count");
  const double m = static_cast<double>(gs.count());
  const VectorXd res = gs.apply(X * X.transpose()) - gs.y;
  const MatrixXd G = gs.adjoint(res);
  LossGrad<MatrixXd> out;
  out.f = res.squaredNorm() / m;
  out.grad = (2.0 / m) * (G + G.transpose()) * X;
  return out;
}

LossGrad<MatrixXd> onebit_loss_grad(const OneBitData& data, const MatrixXd& X) {
  const MatrixXd& a = data.alphaHat;
  require_shape(a.rows() == a.cols() && X.rows() == a.rows(), "one-bit: X has wrong row count");
  const double scale = 1.0 / static_cast<double>(a.size());
  const MatrixXd S = X * X.transpose();
  MatrixXd R(S.rows(), S.cols());
  double f = 0.0;
  for (Index j = 0; j < S.cols(); ++j)
    for (Index i = 0; i < S.rows(); ++i) {
      const double p = sigmoid(S(i, j));
      f -= a(i, j) * std::log(std::max(p, kLogFloor)) +
           (1.0 - a(i, j)) * std::log(std::max(1.0 - p, kLogFloor));
      R(i, j) = (p - a(i, j)) * scale;
    }
  LossGrad<MatrixXd> out;
  out.f = f * scale;
  out.grad = (R + R.transpose()) * X;
  return out;
}

LossGrad<MatrixXd> loss_and_grad_sym(const MeasurementModel& model, const MatrixXd& X) {
  if (const auto* gs = std::get_if<GaussianSensing>(&model.data)) return gaussian_loss_grad_sym(*gs, X);
  if (const auto* ob = std::get_if<OneBitData>(&model.data)) return onebit_loss_grad(*ob, X);
  throw std::invalid_argument(std::string("symmetric real factor not supported for ") +
                              family_name(model.data));
}

PairLossGrad gaussian_loss_grad_asym(const GaussianSensing& gs, const FactorPair& fp) {
  require_shape(fp.U.rows() == gs.rows && fp.V.rows() == gs.cols && fp.U.cols() == fp.V.cols(),
                "gaussian sensing: factor shapes do not match");
  const double m = static_cast<double>(gs.count());
  const VectorXd res = gs.apply(fp.U * fp.V.transpose()) - gs.y;
  const MatrixXd G = gs.adjoint(res);
  PairLossGrad out;
  out.f = res.squaredNorm() / m;
  out.gradU = (2.0 / m) * G * fp.V;
  out.gradV = (2.0 / m) * G.transpose() * fp.U;
  return out;
}

Eigen::SparseMatrix<double> sparse_residual(const EntrySampling& es, const FactorPair& fp) {
  const VectorXd res = completion_residuals(es, fp);
  return assemble_residual(es, (2.0 / static_cast<double>(es.count())) * res);
}

PairLossGrad completion_loss_grad(const EntrySampling& es, const FactorPair& fp) {
  if (es.count() == 0) throw std::invalid_argument("completion: no observed entries");
  const VectorXd res = completion_residuals(es, fp);
  const double count = static_cast<double>(es.count());
  const Eigen::SparseMatrix<double> E = assemble_residual(es, (2.0 / count) * res);
  PairLossGrad out;
  out.f = res.squaredNorm() / count;
  out.gradU = E * fp.V;
  out.gradV = E.transpose() * fp.U;
  return out;
}

PairLossGrad loss_and_grad_asym(const MeasurementModel& model, const FactorPair& fp) {
  if (const auto* gs = std::get_if<GaussianSensing>(&model.data)) return gaussian_loss_grad_asym(*gs, fp);
  if (const auto* es = std::get_if<EntrySampling>(&model.data)) return completion_loss_grad(*es, fp);
  throw std::invalid_argument(std::string("factor pair not supported for ") + family_name(model.data));
}

LossGrad<MatrixXcd> phase_loss_grad(const PhaseRetrievalData& data, const MatrixXcd& X) {
  require_shape(X.rows() == data.vectors.rows(), "phase retrieval: X has wrong row count");
  const double m = static_cast<double>(data.count());
  const MatrixXcd W = data.vectors.adjoint() * X;  // row i = a_i^H X
  const VectorXd res = W.rowwise().squaredNorm() - data.y;
  LossGrad<MatrixXcd> out;
  out.f = res.squaredNorm() / m;
  out.grad = (4.0 / m) * data.vectors * (res.cast<cdouble>().asDiagonal() * W);
  return out;
}

Evaluation evaluate(const MeasurementModel& model, const Iterate& iterate) {
  return std::visit(
      Overloaded{
          [&](const SymFactor<double>& s) {
            auto lg = loss_and_grad_sym(model, s.X);
            return Evaluation{lg.f, SymFactor<double>{std::move(lg.grad)}};
          },
          [&](const SymFactor<cdouble>& s) {
            const auto* pr = std::get_if<PhaseRetrievalData>(&model.data);
            if (!pr)
              throw std::invalid_argument(std::string("complex factor not supported for ") +
                                          family_name(model.data));
            auto lg = phase_loss_grad(*pr, s.X);
            return Evaluation{lg.f, SymFactor<cdouble>{std::move(lg.grad)}};
          },
          [&](const FactorPair& fp) {
            auto lg = loss_and_grad_asym(model, fp);
            return Evaluation{lg.f, FactorPair{std::move(lg.gradU), std::move(lg.gradV)}};
          },
      },
      iterate);
}

MeasurementModel clean_model(const MeasurementModel& model) {
  MeasurementModel clean;
  clean.truth = model.truth;
  clean.data = std::visit(
      Overloaded{
          [&](const GaussianSensing& gs) -> MeasurementData {
            GaussianSensing c = gs;
            c.y = gs.apply(model.real_truth().mstar);
            c.sigma = 0.0;
            return c;
          },
          [&](const EntrySampling& es) -> MeasurementData {
            const MatrixXd& M = model.real_truth().mstar;
            EntrySampling c = es;
            for (Index k = 0; k < es.count(); ++k) c.yObs(k) = M(es.omega[k].row, es.omega[k].col);
            c.sigma = 0.0;
            return c;
          },
          [&](const OneBitData& ob) -> MeasurementData {
            OneBitData c = ob;
            c.alphaHat = model.real_truth().mstar.unaryExpr([](double s) { return sigmoid(s); });
            c.sigma = 0.0;
            return c;
          },
          [&](const PhaseRetrievalData& pr) -> MeasurementData {
            PhaseRetrievalData c = pr;
            c.y = (pr.vectors.adjoint() * model.complex_truth().left).rowwise().squaredNorm();
            c.sigma = 0.0;
            return c;
          },
      },
      model.data);
  return clean;
}

double clean_loss(const MeasurementModel& model, const Iterate& iterate) {
  return evaluate(clean_model(model), iterate).f;
}

double fro_error(const MeasurementModel& model, const Iterate& iterate) {
  return std::visit(Overloaded{
                        [&](const SymFactor<double>& s) { return fro_error(s.X, model.real_truth()); },
                        [&](const SymFactor<cdouble>& s) { return fro_error(s.X, model.complex_truth()); },
                        [&](const FactorPair& fp) { return fro_error(fp, model.real_truth()); },
                    },
                    iterate);
}

}  // namespace lrpgd
