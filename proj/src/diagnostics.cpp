#include "lrpgd/diagnostics.hpp"

#include "lrpgd/detail/overloaded.hpp"

namespace lrpgd {

double dual_p_norm(const Iterate& grad, const Iterate& at, double eta) {
  return std::visit(
      detail::Overloaded{
          [&](const SymFactor<double>& x) {
            return dual_p_norm(std::get<SymFactor<double>>(grad).X, geometry_of(x.X, eta));
          },
          [&](const SymFactor<cdouble>& x) {
            return dual_p_norm(std::get<SymFactor<cdouble>>(grad).X, geometry_of(x.X, eta));
          },
          [&](const FactorPair& fp) {
            const auto& g = std::get<FactorPair>(grad);
            const double u = dual_p_norm(g.U, geometry_of(fp.V, eta));
            const double v = dual_p_norm(g.V, geometry_of(fp.U, eta));
            return std::sqrt(u * u + v * v);
          },
      },
      at);
}

namespace {

template <typename Scalar>
double pl_ratio_impl(const MeasurementModel& model, const Mat<Scalar>& X, double eta) {
  const Evaluation clean = evaluate(clean_model(model), SymFactor<Scalar>{X});
  if (clean.f == 0.0) throw std::domain_error("pl_ratio: exact fit, clean loss is zero");
  const auto& grad = std::get<SymFactor<Scalar>>(clean.grad).X;
  const double dual = dual_p_norm(grad, geometry_of(X, eta));
  return dual * dual / clean.f;
}

}  // namespace

double pl_ratio(const MeasurementModel& model, const MatrixXd& X, double eta) {
  return pl_ratio_impl(model, X, eta);
}

double pl_ratio(const MeasurementModel& model, const MatrixXcd& X, double eta) {
  return pl_ratio_impl(model, X, eta);
}

double coupling_ratio(const TraceRecord& record) {
  if (!record.fClean) throw std::invalid_argument("coupling_ratio: trace row has no clean loss");
  if (!(record.eta > 0.0)) throw std::invalid_argument("coupling_ratio: eta must be positive");
  return std::sqrt(*record.fClean) / record.eta;
}

double minimax_level(double sigma, double n, double r, double m) {
  if (!(n > 0 && r > 0 && m > 0)) throw std::invalid_argument("minimax_level: n, r, m must be positive");
  return sigma * sigma * n * r * std::log(n) / m;
}

}  // namespace lrpgd
