#include "lrpgd/matrix_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lrpgd {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix(std::ostream& os, const MatrixXd& M) {
  os << M.rows() << ' ' << M.cols() << '\n';
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      if (j) os << ' ';
      os << format_double(M(i, j));
    }
    os << '\n';
  }
}

MatrixXd read_matrix(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("read_matrix: missing header line");
  std::istringstream hs(header);
  long long rows = -1, cols = -1;
  if (!(hs >> rows >> cols) || rows < 0 || cols < 0)
    throw std::runtime_error("read_matrix: malformed header '" + header + "'");
  MatrixXd M(rows, cols);
  std::string line;
  for (Index i = 0; i < rows; ++i) {
    if (!std::getline(is, line)) throw std::runtime_error("read_matrix: truncated data");
    std::istringstream ls(line);
    for (Index j = 0; j < cols; ++j) {
      std::string tok;
      if (!(ls >> tok)) throw std::runtime_error("read_matrix: short row " + std::to_string(i));
      char* end = nullptr;
      // strtod rather than stod: subnormal values must not throw.
      M(i, j) = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str()) throw std::runtime_error("read_matrix: bad number '" + tok + "'");
    }
  }
  return M;
}

void save_matrix(const std::filesystem::path& path, const MatrixXd& M) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  write_matrix(os, M);
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

MatrixXd load_matrix(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open for reading: " + path.string());
  return read_matrix(is);
}

}  // namespace lrpgd
