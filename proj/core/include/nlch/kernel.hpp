#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nlch/field.hpp"
#include "nlch/grid.hpp"
#include "nlch/spectral.hpp"

namespace nlch {

enum class KernelFamily { gaussian, exponential, mollified_newtonian };

std::string_view to_string(KernelFamily family) noexcept;
/// Parses "gaussian", "exponential" or "mollified_newtonian".
KernelFamily parse_kernel_family(std::string_view name);

/// Family parameters. `width` is σ for gaussian/exponential; the mollified
/// Newtonian kernel uses `mollification_radius` instead.
struct KernelParams {
  double amplitude = 1.0;
  double width = 0.1;
  double mollification_radius = 0.0;

  bool operator==(const KernelParams&) const = default;
};

/// Throws InvalidArgument on non-positive parameters, σ > L/6, or r_m < 2h.
void validate(KernelFamily family, const KernelParams& params, const Grid& grid);

/// Even interaction kernel J sampled on a periodic grid.
///
///   gaussian:            J(x) = A exp(-|x|² / (2σ²))
///   exponential:         J(x) = A exp(-|x| / σ)
///   mollified_newtonian: J(x) = A / (4π max(|x|, r_m))
///
/// Samples use minimum-image displacements, so J(x) = J(-x) holds exactly on
/// the grid and the DFT of the samples is real.
class Kernel {
 public:
  Kernel(KernelFamily family, const KernelParams& params, const Grid& grid);

  KernelFamily family() const noexcept { return family_; }
  const KernelParams& params() const noexcept { return params_; }
  const Grid& grid() const noexcept { return grid_; }

  /// Real-space samples J(x_i) centred at the origin with periodic wrap.
  const Field& samples() const noexcept { return samples_; }

  /// Real part of the DFT of the samples on the half spectrum. The
  /// convolution multiplier is this times cell_volume.
  const std::vector<double>& spectral_multiplier() const noexcept { return multiplier_; }

  /// max |Im DFT(samples)|; zero up to rounding for an even kernel.
  double spectral_imag_residual() const noexcept { return imag_residual_; }

  /// ∫J = Σ samples · cell_volume; on the torus J∗1 ≡ j_integral.
  double j_integral() const noexcept { return j_integral_; }

  /// ‖∇J‖_{L¹} over the periodic box, from analytic gradient samples.
  double grad_j_l1() const noexcept { return grad_j_l1_; }

  /// Half-spectrum DFT of the analytic gradient samples (purely imaginary).
  const std::vector<std::vector<Complex>>& gradient_multiplier() const noexcept {
    return grad_multiplier_;
  }

 private:
  KernelFamily family_;
  KernelParams params_;
  Grid grid_;
  Field samples_;
  std::vector<double> multiplier_;
  std::vector<std::vector<Complex>> grad_multiplier_;
  double imag_residual_ = 0.0;
  double j_integral_ = 0.0;
  double grad_j_l1_ = 0.0;
};

/// Validates parameters and builds the kernel. Throws InvalidArgument on
/// non-positive parameters, σ > L/6, or r_m < 2h.
Kernel build_kernel(KernelFamily family, const KernelParams& params, const Grid& grid);

/// Periodic convolution ∫ J(x - y) f(y) dy via the spectral multiplier.
Field convolve(const Kernel& k, const Field& f);

/// Same as convolve, writing into a preallocated spectrum buffer; used by
/// the time stepper to avoid reallocations.
void convolve_spectrum(const Kernel& k, Spectrum& f_hat);

/// (∇J) ∗ f, one Field per axis, from the sampled analytic gradient.
std::vector<Field> convolve_gradient(const Kernel& k, const Field& f);

}  // namespace nlch
