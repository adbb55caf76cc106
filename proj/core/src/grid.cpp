#include "nlch/grid.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "nlch/error.hpp"

namespace nlch {

Grid::Grid(int dim, int n_per_axis, double edge_length)
    : dim_(dim), n_(n_per_axis), length_(edge_length) {
  if (dim < 1 || dim > 3) {
    throw InvalidArgument("grid: dim must be 1, 2 or 3 (got " + std::to_string(dim) + ")");
  }
  if (n_per_axis < 4 || !std::has_single_bit(static_cast<unsigned>(n_per_axis))) {
    throw InvalidArgument("grid: n_per_axis must be a power of two >= 4 (got " +
                          std::to_string(n_per_axis) + ")");
  }
  if (!(edge_length > 0.0) || !std::isfinite(edge_length)) {
    throw InvalidArgument("grid: edge_length must be positive and finite");
  }
  const double h = edge_length / n_per_axis;
  cell_volume_ = 1.0;
  volume_ = 1.0;
  size_ = 1;
  for (int a = 0; a < dim; ++a) {
    cell_volume_ *= h;
    volume_ *= edge_length;
    size_ *= static_cast<std::size_t>(n_per_axis);
  }
  spectral_size_ = size_ / static_cast<std::size_t>(n_per_axis) *
                   static_cast<std::size_t>(n_per_axis / 2 + 1);
}

std::array<int, 3> Grid::unflatten(std::size_t flat) const noexcept {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % static_cast<std::size_t>(n_));
    flat /= static_cast<std::size_t>(n_);
  }
  return idx;
}

std::size_t Grid::flatten(const std::array<int, 3>& idx) const noexcept {
  std::size_t flat = 0;
  for (int a = 0; a < dim_; ++a) {
    flat = flat * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx[a]);
  }
  return flat;
}

std::size_t Grid::neighbor(std::size_t flat, int axis, int offset) const noexcept {
  auto idx = unflatten(flat);
  idx[axis] = ((idx[axis] + offset) % n_ + n_) % n_;
  return flatten(idx);
}

}  // namespace nlch
