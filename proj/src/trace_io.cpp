#include "lrpgd/trace_io.hpp"

#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "lrpgd/matrix_io.hpp"

namespace lrpgd {

namespace {

void put(std::ostream& os, const std::optional<double>& v) {
  if (v) os << format_double(*v);
}

std::optional<double> parse_cell(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str()) throw std::runtime_error("trace csv: bad number '" + cell + "'");
  return v;
}

}  // namespace

void write_trace_csv(std::ostream& os, const std::vector<TraceRecord>& trace) {
  os << kTraceHeader << '\n';
  for (const TraceRecord& r : trace) {
    os << r.iter << ',' << format_double(r.eta) << ',' << format_double(r.f) << ',';
    put(os, r.fClean);
    os << ',';
    put(os, r.errFro);
    os << ',' << format_double(r.gradFro) << ',';
    put(os, r.gradDualP);
    os << ',';
    put(os, r.elapsedMs);
    os << '\n';
  }
}

std::vector<TraceRecord> read_trace_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kTraceHeader)
    throw std::runtime_error("trace csv: unexpected header");
  std::vector<TraceRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 8) throw std::runtime_error("trace csv: expected 8 cells in '" + line + "'");
    TraceRecord r;
    r.iter = std::stoull(cells[0]);
    r.eta = parse_cell(cells[1]).value_or(0.0);
    r.f = parse_cell(cells[2]).value_or(0.0);
    r.fClean = parse_cell(cells[3]);
    r.errFro = parse_cell(cells[4]);
    r.gradFro = parse_cell(cells[5]).value_or(0.0);
    r.gradDualP = parse_cell(cells[6]);
    r.elapsedMs = parse_cell(cells[7]);
    out.push_back(r);
  }
  return out;
}

void save_trace_csv(const std::filesystem::path& path, const std::vector<TraceRecord>& trace) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  write_trace_csv(os, trace);
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

std::vector<TraceRecord> load_trace_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open for reading: " + path.string());
  return read_trace_csv(is);
}

}  // namespace lrpgd
