#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "lrpgd/types.hpp"

namespace lrpgd {

// Text matrix format: first line "rows cols", then one row per line with
// entries separated by single spaces, each written with 17 significant digits.

std::string format_double(double v);

void write_matrix(std::ostream& os, const MatrixXd& M);
MatrixXd read_matrix(std::istream& is);

void save_matrix(const std::filesystem::path& path, const MatrixXd& M);
MatrixXd load_matrix(const std::filesystem::path& path);

}  // namespace lrpgd
