#pragma once

#include <fstream>
#include <string>
#include <string_view>

#include "nlch/diagnostics.hpp"

namespace nlch::io {

/// Frozen column order of the time-series CSV.
inline constexpr std::string_view kCsvHeader =
    "t,mass,energy,energy_alt,dissipation_accum,energy_residual,min_phi,max_phi,delta_sep,mu_linf,"
    "inner_iters,dt_used";

/// One CSV line without the trailing newline; reals in %.17g.
std::string format_csv_row(const DiagnosticsRow& row);

/// Writes the header on construction and one line per row.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  void write(const DiagnosticsRow& row);

 private:
  std::string path_;
  std::ofstream out_;
};

}  // namespace nlch::io
