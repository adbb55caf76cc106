#pragma once

#include <array>
#include <cstddef>

namespace nlch {

/// Uniform periodic box [0, L)^dim sampled with n points per axis.
///
/// n must be a power of two and at least 4; dim is 1, 2 or 3. Samples sit at
/// x_i = i * L / n and are stored row-major (last axis fastest).
class Grid {
 public:
  Grid(int dim, int n_per_axis, double edge_length);

  int dim() const noexcept { return dim_; }
  int n_per_axis() const noexcept { return n_; }
  double edge_length() const noexcept { return length_; }

  double spacing() const noexcept { return length_ / n_; }
  double cell_volume() const noexcept { return cell_volume_; }
  double volume() const noexcept { return volume_; }

  /// Total number of grid points, n^dim.
  std::size_t size() const noexcept { return size_; }

  /// Number of complex coefficients of a real-to-complex transform,
  /// n^(dim-1) * (n/2 + 1).
  std::size_t spectral_size() const noexcept { return spectral_size_; }

  /// Per-axis integer index of a flat row-major offset; unused axes are 0.
  std::array<int, 3> unflatten(std::size_t flat) const noexcept;
  std::size_t flatten(const std::array<int, 3>& idx) const noexcept;

  /// Flat offset of the point shifted by `offset` cells along `axis`, with
  /// periodic wrap.
  std::size_t neighbor(std::size_t flat, int axis, int offset) const noexcept;

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.dim_ == b.dim_ && a.n_ == b.n_ && a.length_ == b.length_;
  }

 private:
  int dim_;
  int n_;
  double length_;
  double cell_volume_;
  double volume_;
  std::size_t size_;
  std::size_t spectral_size_;
};

}  // namespace nlch
