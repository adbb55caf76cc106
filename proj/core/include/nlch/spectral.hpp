#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "nlch/aligned.hpp"
#include "nlch/field.hpp"
#include "nlch/grid.hpp"

namespace nlch {

using Complex = std::complex<double>;

/// Half-spectrum (real-to-complex) coefficients of a Field.
///
/// Convention: unnormalized forward DFT, f_hat(k) = Σ_x f(x) exp(-i k·x);
/// the inverse carries the 1/n^dim factor. The last axis stores indices
/// 0..n/2, the others 0..n-1.
class Spectrum {
 public:
  explicit Spectrum(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  std::span<Complex> coeffs() noexcept { return coeffs_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  Complex& operator[](std::size_t i) noexcept { return coeffs_[i]; }
  const Complex& operator[](std::size_t i) const noexcept { return coeffs_[i]; }

 private:
  Grid grid_;
  AlignedVector<Complex> coeffs_;
};

/// Wavenumber data for the half spectrum of one grid, shared between calls.
///
/// k_j ∈ {-n/2, ..., n/2-1} · 2π/L. `deriv` holds the first-derivative
/// wavenumbers with the Nyquist entry zeroed; `k2` is |k|² with the Nyquist
/// entry kept. `weight` is the Hermitian multiplicity (1 or 2) of each
/// stored coefficient.
struct WaveTable {
  std::vector<double> k2;
  std::vector<std::vector<double>> deriv;
  std::vector<double> weight;
};

std::shared_ptr<const WaveTable> wave_table(const Grid& grid);

/// Thin handle over cached FFTW plans for one grid. Planning is serialized
/// internally; execution is reentrant. Buffers must come from AlignedVector.
class Fft {
 public:
  explicit Fft(const Grid& grid);

  /// Unnormalized forward transform; `in` is preserved.
  void forward(const double* in, Complex* out) const;
  /// Unnormalized inverse transform; overwrites `in`.
  void backward_destructive(Complex* in, double* out) const;

 private:
  struct Plans;
  std::shared_ptr<const Plans> plans_;
};

Spectrum forward(const Field& f);
/// Normalized inverse (includes 1/n^dim).
Field inverse(const Spectrum& s);

/// Spectral gradient, one Field per axis.
std::vector<Field> gradient(const Field& f);

/// Σ_j ‖∂_j f‖² from the real-space components of `gradient`.
double h1_seminorm_sq(const Field& f);
/// Same quantity through Parseval: Σ_k |k_deriv|² |f_hat|² · cell_volume / n^dim.
double h1_seminorm_sq_spectral(const Field& f);
/// ‖f‖² through Parseval.
double l2_norm_sq_spectral(const Field& f);

/// ‖(-Δ)^{-1/2} (f - mean f)‖, the periodic analogue of the dual norm on
/// zero-mean functionals.
double dual_norm(const Field& f);

/// Spectral Laplacian.
Field laplacian(const Field& f);

}  // namespace nlch
