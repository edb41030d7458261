#include "lrpgd/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "lrpgd/ground_truth.hpp"
#include "lrpgd/measurements.hpp"
#include "lrpgd/rng.hpp"

namespace lrpgd {

MatrixXd central_difference(const std::function<double(const MatrixXd&)>& f, const MatrixXd& X, double h) {
  MatrixXd G(X.rows(), X.cols());
  MatrixXd Y = X;
  for (Index k = 0; k < X.size(); ++k) {
    const double x = X(k);
    const double step = h * std::max(1.0, std::abs(x));
    Y(k) = x + step;
    const double fp = f(Y);
    Y(k) = x - step;
    const double fm = f(Y);
    Y(k) = x;
    G(k) = (fp - fm) / (2.0 * step);
  }
  return G;
}

MatrixXcd central_difference(const std::function<double(const MatrixXcd&)>& f, const MatrixXcd& X, double h) {
  MatrixXcd G(X.rows(), X.cols());
  MatrixXcd Y = X;
  const auto partial = [&](Index k, cdouble dir) {
    const double step = h * std::max(1.0, std::abs(X(k)));
    Y(k) = X(k) + step * dir;
    const double fp = f(Y);
    Y(k) = X(k) - step * dir;
    const double fm = f(Y);
    Y(k) = X(k);
    return (fp - fm) / (2.0 * step);
  };
  for (Index k = 0; k < X.size(); ++k) G(k) = cdouble(partial(k, {1.0, 0.0}), partial(k, {0.0, 1.0}));
  return G;
}

namespace {

template <typename M>
double rel(const M& g, const M& fd) {
  return (g - fd).norm() / std::max(fd.norm(), 1e-300);
}

GradCheckResult check_gaussian(int points, std::uint64_t seed) {
  const auto gt = make_ground_truth(6, 2, 10, true, derive_seed(seed, 0));
  const auto gs = gaussian_ensemble(gt, 30, 0.1, derive_seed(seed, 1));
  Rng rng(derive_seed(seed, 2));
  GradCheckResult out{"gaussian-sensing", points, 0.0};
  for (int p = 0; p < points; ++p) {
    const MatrixXd X = rng.gaussian(6, 3);
    const auto lg = gaussian_loss_grad_sym(gs, X);
    const MatrixXd fd = central_difference([&](const MatrixXd& Y) { return gaussian_loss_grad_sym(gs, Y).f; }, X);
    out.maxRelError = std::max(out.maxRelError, rel(lg.grad, fd));
  }
  return out;
}

GradCheckResult check_completion(int points, std::uint64_t seed) {
  Rng data(derive_seed(seed, 3));
  const MatrixXd Y = data.gaussian(8, 7);
  const auto es = sample_entries(Y, 0.55, 0.0, derive_seed(seed, 4));
  Rng rng(derive_seed(seed, 5));
  GradCheckResult out{"entry-sampling", points, 0.0};
  for (int p = 0; p < points; ++p) {
    const FactorPair fp{rng.gaussian(8, 3), rng.gaussian(7, 3)};
    const auto lg = completion_loss_grad(es, fp);
    const MatrixXd fdU =
        central_difference([&](const MatrixXd& U) { return completion_loss_grad(es, {U, fp.V}).f; }, fp.U);
    const MatrixXd fdV =
        central_difference([&](const MatrixXd& V) { return completion_loss_grad(es, {fp.U, V}).f; }, fp.V);
    const double num = std::hypot((lg.gradU - fdU).norm(), (lg.gradV - fdV).norm());
    const double den = std::max(std::hypot(fdU.norm(), fdV.norm()), 1e-300);
    out.maxRelError = std::max(out.maxRelError, num / den);
  }
  return out;
}

GradCheckResult check_onebit(int points, std::uint64_t seed) {
  const auto gt = make_ground_truth(6, 2, 10, true, derive_seed(seed, 6));
  const auto ob = onebit_ensemble(gt, 200, 0.0, derive_seed(seed, 7));
  Rng rng(derive_seed(seed, 8));
  GradCheckResult out{"one-bit", points, 0.0};
  for (int p = 0; p < points; ++p) {
    const MatrixXd X = rng.gaussian(6, 2);
    const auto lg = onebit_loss_grad(ob, X);
    const MatrixXd fd = central_difference([&](const MatrixXd& Y) { return onebit_loss_grad(ob, Y).f; }, X);
    out.maxRelError = std::max(out.maxRelError, rel(lg.grad, fd));
  }
  return out;
}

GradCheckResult check_phase(int points, std::uint64_t seed) {
  const auto gt = make_phase_truth(5, derive_seed(seed, 9));
  const auto pr = phase_ensemble(gt, 25, 0.1, derive_seed(seed, 10));
  Rng rng(derive_seed(seed, 11));
  GradCheckResult out{"phase-retrieval", points, 0.0};
  for (int p = 0; p < points; ++p) {
    const MatrixXcd X = rng.complex_gaussian(5, 2);
    const auto lg = phase_loss_grad(pr, X);
    const MatrixXcd fd = central_difference([&](const MatrixXcd& Y) { return phase_loss_grad(pr, Y).f; }, X);
    out.maxRelError = std::max(out.maxRelError, rel(lg.grad, fd));
  }
  return out;
}

}  // namespace

std::vector<GradCheckResult> gradient_check_suite(int points, std::uint64_t seed) {
  return {check_gaussian(points, seed), check_completion(points, seed), check_onebit(points, seed),
          check_phase(points, seed)};
}

}  // namespace lrpgd
