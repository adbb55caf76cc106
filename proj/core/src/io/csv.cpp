#include "nlch/io/csv.hpp"

#include <cstdio>

#include "nlch/error.hpp"

namespace nlch::io {

std::string format_csv_row(const DiagnosticsRow& r) {
  char buf[512];
  const int len = std::snprintf(buf, sizeof buf,
                                "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%.17g", r.t,
                                r.mass, r.energy, r.energy_alt, r.dissipation_accum, r.energy_residual,
                                r.min_phi, r.max_phi, r.delta_sep, r.mu_linf, r.inner_iters, r.dt_used);
  return std::string(buf, static_cast<std::size_t>(len));
}

CsvWriter::CsvWriter(const std::string& path) : path_(path), out_(path, std::ios::trunc) {
  if (!out_) throw IoError("cannot open '" + path + "' for writing");
  out_ << kCsvHeader << '\n';
}

void CsvWriter::write(const DiagnosticsRow& row) {
  out_ << format_csv_row(row) << '\n';
  if (!out_) throw IoError("write failed for '" + path_ + "'");
}

}  // namespace nlch::io
