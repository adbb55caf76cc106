#include "nlch/io/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "nlch/error.hpp"

namespace nlch::io {

namespace {

constexpr char kMagic[6] = {'N', 'L', 'C', 'H', '1', '\0'};

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_uint(const std::uint8_t* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

double get_f64(const std::uint8_t* p) { return std::bit_cast<double>(get_uint(p, 8)); }

}  // namespace

std::vector<std::uint8_t> encode_snapshot(const Field& phi, double t) {
  const Grid& g = phi.grid();
  std::vector<std::uint8_t> out;
  out.reserve(kSnapshotHeaderBytes + 8 * phi.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  out.push_back(static_cast<std::uint8_t>(g.dim()));
  const auto n = static_cast<std::uint32_t>(g.n_per_axis());
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(n >> (8 * i)));
  put_f64(out, g.edge_length());
  put_f64(out, t);
  for (double v : phi.values()) put_f64(out, v);
  return out;
}

Snapshot decode_snapshot(const std::vector<std::uint8_t>& bytes, const std::optional<Grid>& expected) {
  if (bytes.size() >= 5 && std::memcmp(bytes.data(), kMagic, 4) == 0 &&
      (bytes[4] != '1' || (bytes.size() >= 6 && bytes[5] != '\0'))) {
    throw IoError("snapshot version mismatch: expected NLCH1");
  }
  if (bytes.size() < sizeof kMagic || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw IoError("snapshot: bad magic");
  }
  if (bytes.size() < kSnapshotHeaderBytes) {
    throw IoError("snapshot truncated: expected at least " + std::to_string(kSnapshotHeaderBytes) +
                  " bytes, got " + std::to_string(bytes.size()));
  }
  const int dim = bytes[6];
  const auto n = get_uint(bytes.data() + 7, 4);
  const double length = get_f64(bytes.data() + 11);
  const double t = get_f64(bytes.data() + 19);
  if (dim < 1 || dim > 3 || n < 4 || n > (1u << 20)) {
    throw IoError("snapshot: invalid grid header (dim " + std::to_string(dim) + ", n " + std::to_string(n) + ")");
  }
  std::uint64_t count = 1;
  for (int a = 0; a < dim; ++a) count *= n;
  const std::uint64_t want = kSnapshotHeaderBytes + 8 * count;
  if (bytes.size() < want) {
    throw IoError("snapshot truncated: expected " + std::to_string(want) + " bytes, got " +
                  std::to_string(bytes.size()));
  }
  if (bytes.size() > want) {
    throw IoError("snapshot size mismatch: expected " + std::to_string(want) + " bytes, got " +
                  std::to_string(bytes.size()));
  }
  std::optional<Grid> grid;
  try {
    grid.emplace(dim, static_cast<int>(n), length);
  } catch (const InvalidArgument& e) {
    throw IoError(std::string("snapshot: invalid grid header: ") + e.what());
  }
  if (expected && !(*expected == *grid)) {
    throw IoError("snapshot grid mismatch: file has dim " + std::to_string(dim) + ", n " + std::to_string(n) +
                  ", expected dim " + std::to_string(expected->dim()) + ", n " +
                  std::to_string(expected->n_per_axis()));
  }
  Field phi(*grid);
  const std::uint8_t* p = bytes.data() + kSnapshotHeaderBytes;
  for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = get_f64(p + 8 * i);
  return {std::move(phi), t};
}

void write_snapshot(const Field& phi, double t, const std::string& path) {
  const auto bytes = encode_snapshot(phi, t);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path + "'");
}

Snapshot read_snapshot(const std::string& path, const std::optional<Grid>& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open snapshot '" + path + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_snapshot(bytes, expected);
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

std::string snapshot_file_name(std::int64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%06lld.nlch", static_cast<long long>(index));
  return buf;
}

std::vector<std::string> list_snapshots(const std::string& directory) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(directory, ec)) throw IoError("not a directory: '" + directory + "'");
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(directory)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.starts_with("snap_") && name.ends_with(".nlch")) {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace nlch::io
