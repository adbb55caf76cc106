#include "nlch/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "nlch/error.hpp"

namespace nlch {

std::string_view to_string(KernelFamily family) noexcept {
  switch (family) {
    case KernelFamily::gaussian: return "gaussian";
    case KernelFamily::exponential: return "exponential";
    case KernelFamily::mollified_newtonian: return "mollified_newtonian";
  }
  return "unknown";
}

KernelFamily parse_kernel_family(std::string_view name) {
  if (name == "gaussian") return KernelFamily::gaussian;
  if (name == "exponential") return KernelFamily::exponential;
  if (name == "mollified_newtonian") return KernelFamily::mollified_newtonian;
  throw InvalidArgument("unknown kernel family '" + std::string(name) + "'");
}

namespace {

struct Sample {
  double value;
  std::array<double, 3> grad;  // analytic gradient (zero where undefined)
  double grad_norm;
};

Sample evaluate(KernelFamily family, const KernelParams& p, const std::array<double, 3>& x,
                int dim) {
  double r2 = 0.0;
  for (int a = 0; a < dim; ++a) r2 += x[a] * x[a];
  const double r = std::sqrt(r2);
  Sample s{0.0, {0.0, 0.0, 0.0}, 0.0};
  switch (family) {
    case KernelFamily::gaussian: {
      const double s2 = p.width * p.width;
      s.value = p.amplitude * std::exp(-r2 / (2.0 * s2));
      for (int a = 0; a < dim; ++a) s.grad[a] = -x[a] / s2 * s.value;
      s.grad_norm = r / s2 * s.value;
      break;
    }
    case KernelFamily::exponential: {
      s.value = p.amplitude * std::exp(-r / p.width);
      if (r > 0.0) {
        const double slope = s.value / p.width;
        for (int a = 0; a < dim; ++a) s.grad[a] = -slope * x[a] / r;
        s.grad_norm = slope;
      }
      break;
    }
    case KernelFamily::mollified_newtonian: {
      const double rm = p.mollification_radius;
      s.value = p.amplitude / (4.0 * std::numbers::pi * std::max(r, rm));
      // Constant inside the ball; the gradient on the boundary sphere is
      // taken from the inside (zero).
      if (r > rm) {
        const double slope = p.amplitude / (4.0 * std::numbers::pi * r2);
        for (int a = 0; a < dim; ++a) s.grad[a] = -slope * x[a] / r;
        s.grad_norm = slope;
      }
      break;
    }
  }
  return s;
}

}  // namespace

void validate(KernelFamily family, const KernelParams& p, const Grid& grid) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(p.amplitude)) throw InvalidArgument("kernel: amplitude must be positive");
  if (family == KernelFamily::mollified_newtonian) {
    if (!positive(p.mollification_radius)) {
      throw InvalidArgument("kernel: mollification_radius must be positive");
    }
    if (p.mollification_radius < 2.0 * grid.spacing()) {
      throw InvalidArgument("kernel: mollification_radius under-resolved (needs >= 2 grid spacings)");
    }
    return;
  }
  if (!positive(p.width)) throw InvalidArgument("kernel: width must be positive");
  if (p.width > grid.edge_length() / 6.0) {
    throw InvalidArgument("kernel: width exceeds L/6; periodization error is not controlled");
  }
}

Kernel::Kernel(KernelFamily family, const KernelParams& params, const Grid& grid)
    : family_(family), params_(params), grid_(grid), samples_(grid) {
  validate(family, params, grid);

  const int n = grid.n_per_axis();
  const int dim = grid.dim();
  const double h = grid.spacing();
  std::vector<Field> grad(dim, Field(grid));
  double grad_sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto idx = grid.unflatten(i);
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) x[a] = (idx[a] < n / 2 ? idx[a] : idx[a] - n) * h;
    const Sample s = evaluate(family, params, x, dim);
    samples_[i] = s.value;
    grad_sum += s.grad_norm;
    // The Nyquist plane is its own mirror image, so an odd component must
    // vanish there to stay exactly odd.
    for (int a = 0; a < dim; ++a) grad[a][i] = (idx[a] == n / 2) ? 0.0 : s.grad[a];
  }
  grad_j_l1_ = grad_sum * grid.cell_volume();

  const Spectrum jh = forward(samples_);
  multiplier_.resize(grid.spectral_size());
  double total = 0.0;
  for (std::size_t s = 0; s < grid.spectral_size(); ++s) {
    multiplier_[s] = jh[s].real();
    imag_residual_ = std::max(imag_residual_, std::abs(jh[s].imag()));
  }
  for (double v : samples_.values()) total += v;
  j_integral_ = total * grid.cell_volume();

  grad_multiplier_.reserve(dim);
  for (int a = 0; a < dim; ++a) {
    const Spectrum gh = forward(grad[a]);
    grad_multiplier_.emplace_back(gh.coeffs().begin(), gh.coeffs().end());
  }
}

Kernel build_kernel(KernelFamily family, const KernelParams& params, const Grid& grid) {
  return Kernel(family, params, grid);
}

void convolve_spectrum(const Kernel& k, Spectrum& f_hat) {
  require_same_grid(k.grid(), f_hat.grid(), "convolve");
  const double dv = k.grid().cell_volume();
  const auto& m = k.spectral_multiplier();
  for (std::size_t s = 0; s < m.size(); ++s) f_hat[s] *= m[s] * dv;
}

Field convolve(const Kernel& k, const Field& f) {
  require_same_grid(k.grid(), f.grid(), "convolve");
  Spectrum fh = forward(f);
  convolve_spectrum(k, fh);
  return inverse(fh);
}

std::vector<Field> convolve_gradient(const Kernel& k, const Field& f) {
  require_same_grid(k.grid(), f.grid(), "convolve_gradient");
  const Spectrum fh = forward(f);
  const double dv = k.grid().cell_volume();
  std::vector<Field> out;
  for (const auto& gm : k.gradient_multiplier()) {
    Spectrum c(f.grid());
    for (std::size_t s = 0; s < gm.size(); ++s) c[s] = gm[s] * fh[s] * dv;
    out.push_back(inverse(c));
  }
  return out;
}

}  // namespace nlch
