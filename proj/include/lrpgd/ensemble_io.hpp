#pragma once

#include <filesystem>
#include <iosfwd>

#include "lrpgd/measurements.hpp"

namespace lrpgd {

// Ensemble files: one JSON header line naming the family, m, sigma and seed
// (plus shape fields), followed by text matrices:
//   gaussian-sensing  operatorRows (m x rows*cols), y (m x 1)
//   entry-sampling    m x 3 table of (row, col, y)
//   one-bit           alphaHat
//   phase-retrieval   Re(vectors), Im(vectors), y (m x 1)

void write_ensemble(std::ostream& os, const MeasurementData& data);
MeasurementData read_ensemble(std::istream& is);

void save_ensemble(const std::filesystem::path& path, const MeasurementData& data);
MeasurementData load_ensemble(const std::filesystem::path& path);

}  // namespace lrpgd
