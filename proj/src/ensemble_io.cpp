#include "lrpgd/ensemble_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "lrpgd/detail/overloaded.hpp"
#include "lrpgd/matrix_io.hpp"

namespace lrpgd {

using nlohmann::json;

void write_ensemble(std::ostream& os, const MeasurementData& data) {
  std::visit(detail::Overloaded{
                 [&](const GaussianSensing& gs) {
                   json h{{"family", "gaussian-sensing"}, {"m", gs.count()}, {"sigma", gs.sigma},
                          {"seed", gs.seed},           {"rows", gs.rows},  {"cols", gs.cols}};
                   os << h.dump() << '\n';
                   write_matrix(os, gs.operatorRows);
                   write_matrix(os, gs.y);
                 },
                 [&](const EntrySampling& es) {
                   json h{{"family", "entry-sampling"}, {"m", es.count()}, {"sigma", es.sigma},
                          {"seed", es.seed},          {"rows", es.rows},  {"cols", es.cols}};
                   os << h.dump() << '\n';
                   MatrixXd table(es.count(), 3);
                   for (Index k = 0; k < es.count(); ++k)
                     table.row(k) << static_cast<double>(es.omega[k].row),
                         static_cast<double>(es.omega[k].col), es.yObs(k);
                   write_matrix(os, table);
                 },
                 [&](const OneBitData& ob) {
                   json h{{"family", "one-bit"}, {"m", ob.alphaHat.size()}, {"sigma", ob.sigma},
                          {"seed", ob.seed},   {"trials", ob.trials}};
                   os << h.dump() << '\n';
                   write_matrix(os, ob.alphaHat);
                 },
                 [&](const PhaseRetrievalData& pr) {
                   json h{{"family", "phase-retrieval"}, {"m", pr.count()}, {"sigma", pr.sigma},
                          {"seed", pr.seed},           {"n", pr.vectors.rows()}};
                   os << h.dump() << '\n';
                   write_matrix(os, pr.vectors.real());
                   write_matrix(os, pr.vectors.imag());
                   write_matrix(os, pr.y);
                 },
             },
             data);
}

namespace {

MeasurementData read_payload(std::istream& is, const json& h) {
  const std::string family = h.at("family").get<std::string>();
  const auto seed = h.at("seed").get<std::uint64_t>();
  const auto sigma = h.at("sigma").get<double>();
  const auto m = h.at("m").get<Index>();

  if (family == "gaussian-sensing") {
    GaussianSensing gs;
    gs.rows = h.at("rows").get<Index>();
    gs.cols = h.at("cols").get<Index>();
    gs.sigma = sigma;
    gs.seed = seed;
    gs.operatorRows = read_matrix(is);
    gs.y = read_matrix(is);
    if (gs.operatorRows.rows() != m || gs.operatorRows.cols() != gs.rows * gs.cols || gs.y.size() != m)
      throw std::runtime_error("read_ensemble: gaussian-sensing payload does not match header");
    return gs;
  }
  if (family == "entry-sampling") {
    const MatrixXd table = read_matrix(is);
    if (table.rows() != m || table.cols() != 3)
      throw std::runtime_error("read_ensemble: entry-sampling payload does not match header");
    std::vector<Entry> omega;
    omega.reserve(m);
    for (Index k = 0; k < m; ++k)
      omega.push_back({static_cast<Index>(table(k, 0)), static_cast<Index>(table(k, 1))});
    return make_entry_sampling(h.at("rows").get<Index>(), h.at("cols").get<Index>(), std::move(omega),
                               table.col(2), sigma, seed);
  }
  if (family == "one-bit") {
    OneBitData ob;
    ob.trials = h.at("trials").get<std::int64_t>();
    ob.sigma = sigma;
    ob.seed = seed;
    ob.alphaHat = read_matrix(is);
    return ob;
  }
  if (family == "phase-retrieval") {
    PhaseRetrievalData pr;
    pr.sigma = sigma;
    pr.seed = seed;
    const MatrixXd re = read_matrix(is);
    const MatrixXd im = read_matrix(is);
    if (re.rows() != im.rows() || re.cols() != im.cols() || re.cols() != m)
      throw std::runtime_error("read_ensemble: phase-retrieval payload does not match header");
    pr.vectors.resize(re.rows(), re.cols());
    pr.vectors.real() = re;
    pr.vectors.imag() = im;
    pr.y = read_matrix(is);
    return pr;
  }
  throw std::runtime_error("read_ensemble: unknown family '" + family + "'");
}

}  // namespace

MeasurementData read_ensemble(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("read_ensemble: missing header");
  try {
    return read_payload(is, json::parse(line));
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("read_ensemble: bad header: ") + e.what());
  }
}

void save_ensemble(const std::filesystem::path& path, const MeasurementData& data) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  write_ensemble(os, data);
}

MeasurementData load_ensemble(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open for reading: " + path.string());
  return read_ensemble(is);
}

}  // namespace lrpgd
