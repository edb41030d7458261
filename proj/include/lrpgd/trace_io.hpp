#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "lrpgd/optimizers.hpp"

namespace lrpgd {

inline constexpr const char* kTraceHeader = "iter,eta,f,f_clean,err_fro,grad_fro,grad_dualp,elapsed_ms";

/// CSV with kTraceHeader; optional fields as empty cells, floats with 17
/// significant digits.
void write_trace_csv(std::ostream& os, const std::vector<TraceRecord>& trace);
std::vector<TraceRecord> read_trace_csv(std::istream& is);

void save_trace_csv(const std::filesystem::path& path, const std::vector<TraceRecord>& trace);
std::vector<TraceRecord> load_trace_csv(const std::filesystem::path& path);

}  // namespace lrpgd
