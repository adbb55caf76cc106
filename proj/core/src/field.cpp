#include "nlch/field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nlch/error.hpp"

namespace nlch {

Field::Field(const Grid& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

Field::Field(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(values.begin(), values.end()) {
  if (values_.size() != grid_.size()) {
    throw InvalidArgument("field: expected " + std::to_string(grid_.size()) +
                          " values, got " + std::to_string(values_.size()));
  }
}

Field Field::from_function(const Grid& grid,
                           const std::function<double(const std::array<double, 3>&)>& f) {
  Field out(grid);
  const double h = grid.spacing();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto idx = grid.unflatten(i);
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int a = 0; a < grid.dim(); ++a) x[a] = idx[a] * h;
    out.values_[i] = f(x);
  }
  return out;
}

bool Field::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double Field::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }
double Field::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

Field& Field::operator+=(const Field& other) {
  require_same_grid(grid_, other.grid_, "field +=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(grid_, other.grid_, "field -=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double s) noexcept {
  for (double& v : values_) v *= s;
  return *this;
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) {
    throw InvalidArgument(std::string(what) + ": grid mismatch");
  }
}

double mean(const Field& f) {
  const auto v = f.values();
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double integral(const Field& f) {
  const auto v = f.values();
  return std::accumulate(v.begin(), v.end(), 0.0) * f.grid().cell_volume();
}

double lp_norm(const Field& f, double p) {
  if (std::isnan(p) || p < 1.0) {
    throw InvalidArgument("lp_norm: p must be >= 1");
  }
  const auto v = f.values();
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  double sum = 0.0;
  if (p == 2.0) {
    for (double x : v) sum += x * x;
    return std::sqrt(sum * f.grid().cell_volume());
  }
  for (double x : v) sum += std::pow(std::abs(x), p);
  return std::pow(sum * f.grid().cell_volume(), 1.0 / p);
}

double inner(const Field& f, const Field& g) {
  require_same_grid(f.grid(), g.grid(), "inner");
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += f[i] * g[i];
  return sum * f.grid().cell_volume();
}

Field truncate_above(const Field& f, double rho) {
  Field out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::max(f[i] - rho, 0.0);
  return out;
}

Field truncate_below(const Field& f, double rho) {
  Field out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::max(-f[i] - rho, 0.0);
  return out;
}

double fd_gradient_norm_sq(const Field& f) {
  const Grid& g = f.grid();
  const double inv2h = 1.0 / (2.0 * g.spacing());
  double sum = 0.0;
  for (int axis = 0; axis < g.dim(); ++axis) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double d = (f[g.neighbor(i, axis, +1)] - f[g.neighbor(i, axis, -1)]) * inv2h;
      sum += d * d;
    }
  }
  return sum * g.cell_volume();
}

}  // namespace nlch
