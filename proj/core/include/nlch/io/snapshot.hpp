#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlch/field.hpp"
#include "nlch/grid.hpp"

namespace nlch::io {

/// Binary field snapshot, all integers and doubles little-endian:
///
///   offset  size  content
///   0       6     magic "NLCH1\0"
///   6       1     u8 dim
///   7       4     u32 n_per_axis
///   11      8     f64 edge_length
///   19      8     f64 time
///   27      8·N   f64 values, row-major
inline constexpr std::size_t kSnapshotHeaderBytes = 27;

struct Snapshot {
  Field phi;
  double t = 0.0;
};

std::vector<std::uint8_t> encode_snapshot(const Field& phi, double t);

/// Throws IoError on bad magic, a different format version, a truncated or
/// oversized payload, an invalid grid, or a grid differing from `expected`.
Snapshot decode_snapshot(const std::vector<std::uint8_t>& bytes,
                         const std::optional<Grid>& expected = std::nullopt);

void write_snapshot(const Field& phi, double t, const std::string& path);
Snapshot read_snapshot(const std::string& path, const std::optional<Grid>& expected = std::nullopt);

/// File name used for the i-th snapshot of a run: snap_000042.nlch.
std::string snapshot_file_name(std::int64_t index);

/// All snap_*.nlch files of a directory in name order.
std::vector<std::string> list_snapshots(const std::string& directory);

}  // namespace nlch::io
