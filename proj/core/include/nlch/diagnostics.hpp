#pragma once

#include <optional>
#include <span>

#include "nlch/field.hpp"
#include "nlch/kernel.hpp"
#include "nlch/potential.hpp"
#include "nlch/state.hpp"

namespace nlch {

/// One line of the run time series.
struct DiagnosticsRow {
  double t = 0.0;
  double mass = 0.0;  // mean(phi)
  double energy = 0.0;
  double energy_alt = 0.0;
  double dissipation_accum = 0.0;
  double energy_residual = 0.0;  // E(t) + dissipation_accum - E(0)
  double min_phi = 0.0;
  double max_phi = 0.0;
  double delta_sep = 0.0;  // 1 - max(|min_phi|, |max_phi|)
  double mu_linf = 0.0;
  int inner_iters = 0;
  double dt_used = 0.0;
};

/// E = -1/2 Σ φ (J∗φ) dv + Σ F(φ) dv.
double energy(const Field& phi, const Kernel& k, const PotentialParams& p);

/// The same energy assembled through the double-difference form
///   1/2 (J∗1) ‖φ‖² - 1/2 ∫ φ (J∗φ) + ∫ (F(φ) - (J∗1)/2 φ²).
double energy_alt(const Field& phi, const Kernel& k, const PotentialParams& p);

/// 1 - ‖φ‖_∞.
double separation_margin(const Field& phi);

/// ‖u‖_{L^{10/3}} / (‖u‖^{2/5} ‖u‖_V^{3/5}) with ‖u‖_V² = ‖u‖² + ‖∇u‖².
/// Throws InvalidArgument for the zero field.
double gn_ratio(const Field& u);

/// ‖f_ρ‖ / ‖∇f_ρ‖ for f_ρ = (φ - ρ)^+, with a centered-difference gradient.
/// Empty when f_ρ ≡ 0. Throws NumericalError when f_ρ is a nonzero constant.
std::optional<double> poincare_ratio(const Field& phi, double rho);

/// Lower-phase counterpart on (φ + ρ)^-.
std::optional<double> poincare_ratio_lower(const Field& phi, double rho);

double mu_linf(const SimState& state);

/// Builds a row from a state; the energy residual is taken against
/// `initial_energy`.
DiagnosticsRow make_row(const SimState& state, const Kernel& k, const PotentialParams& p,
                        double initial_energy, int inner_iters, double dt_used);

struct PoincareEstimate {
  double c_p = 0.0;           // max ratio over all probes (both phases)
  std::size_t evaluated = 0;  // probes with a finite ratio
  std::size_t absent = 0;     // probes with a vanishing truncation
};

/// Sweeps ρ over `n_rho` equispaced values in [rho_lo, rho_hi] for every
/// field, for both phases.
PoincareEstimate estimate_c_p(std::span<const Field> fields, double rho_lo, double rho_hi,
                              int n_rho);

/// Max gn_ratio over the nonzero probes.
double estimate_c_hat(std::span<const Field> probes);

}  // namespace nlch
