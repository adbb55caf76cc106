#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "nlch/aligned.hpp"
#include "nlch/grid.hpp"

namespace nlch {

/// Real scalar samples on a Grid (phase variable, chemical potential,
/// truncations). Value type; arithmetic requires matching grids.
class Field {
 public:
  explicit Field(const Grid& grid, double fill = 0.0);
  Field(const Grid& grid, std::vector<double> values);

  /// Samples f(x) at every grid point; x is the physical coordinate
  /// (unused axes are 0).
  static Field from_function(const Grid& grid,
                             const std::function<double(const std::array<double, 3>&)>& f);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double* data() noexcept { return values_.data(); }
  const double* data() const noexcept { return values_.data(); }

  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  bool all_finite() const noexcept;
  double min() const noexcept;
  double max() const noexcept;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s) noexcept;

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(Field a, double s) noexcept { return a *= s; }
  friend Field operator*(double s, Field a) noexcept { return a *= s; }
  friend Field operator-(Field a) noexcept { return a *= -1.0; }

 private:
  Grid grid_;
  AlignedVector<double> values_;
};

/// Throws InvalidArgument unless both fields live on the same grid.
void require_same_grid(const Grid& a, const Grid& b, const char* what);

/// Integral mean (Σ f · cell_volume) / |Ω|.
double mean(const Field& f);

/// Midpoint-rule integral Σ f · cell_volume.
double integral(const Field& f);

inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// (Σ |f|^p · cell_volume)^(1/p); p = kInfNorm gives max |f|. Rejects p < 1.
double lp_norm(const Field& f, double p);

/// L2 inner product Σ f g · cell_volume.
double inner(const Field& f, const Field& g);

/// Pointwise (f - rho)^+.
Field truncate_above(const Field& f, double rho);

/// Pointwise (f + rho)^- = (-f - rho)^+, the lower-phase truncation.
Field truncate_below(const Field& f, double rho);

/// Σ_j ‖D_j f‖² with centered periodic differences. Used where the field has
/// kinks (truncations) and spectral differentiation would ring.
double fd_gradient_norm_sq(const Field& f);

}  // namespace nlch
