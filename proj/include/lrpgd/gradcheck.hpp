#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lrpgd/types.hpp"

namespace lrpgd {

/// Central differences of a real function of a real matrix, one coordinate
/// at a time with step h * max(1, |x_k|).
MatrixXd central_difference(const std::function<double(const MatrixXd&)>& f, const MatrixXd& X, double h = 1e-5);

/// Same for a complex argument; the result holds d/dRe in its real part and
/// d/dIm in its imaginary part.
MatrixXcd central_difference(const std::function<double(const MatrixXcd&)>& f, const MatrixXcd& X, double h = 1e-5);

struct GradCheckResult {
  std::string family;
  int points = 0;
  double maxRelError = 0.0;  // max over points of ||g - g_fd||_F / ||g_fd||_F
};

/// Analytic against finite-difference gradients at `points` random
/// iterates for each of the four measurement families.
std::vector<GradCheckResult> gradient_check_suite(int points = 50, std::uint64_t seed = 1);

}  // namespace lrpgd
