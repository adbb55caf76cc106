#pragma once

#include <span>
#include <vector>

#include "nlch/degiorgi.hpp"
#include "nlch/field.hpp"
#include "nlch/kernel.hpp"
#include "nlch/potential.hpp"

namespace nlch {

struct EquilibriumOptions {
  double tol = 1e-12;  // sup-norm update of the undamped map
  int max_iters = 20000;
  double omega = 0.5;  // initial damping, halved when the update grows

  bool operator==(const EquilibriumOptions&) const = default;
};

struct EquilibriumResult {
  Field phi_inf;
  double mu_inf = 0.0;
  double residual_linf = 0.0;  // ‖F'(φ∞) - J∗φ∞ - μ∞‖_∞
  double mass_error = 0.0;     // |mean(φ∞) - m|
  int iterations = 0;
  double separation_margin = 0.0;
  bool converged = false;
  double last_update = 0.0;
};

/// Solves F'(φ) - J∗φ = μ with mean(φ) = m by the damped fixed point
///   φ ← (1-ω) φ + ω tanh((J∗φ + μ)/ᾱ),
/// μ fixed at each step by bisection on the mean. On non-convergence the
/// last iterate is returned with converged = false.
EquilibriumResult solve_stationary(const Kernel& k, const PotentialParams& p, double m,
                                   const Field& guess, const EquilibriumOptions& options = {});

/// μ with mean(tanh((jphi + μ)/ᾱ)) = m, by bisection on the bracket
/// [ᾱ atanh(m) - max jphi, ᾱ atanh(m) - min jphi].
double solve_mass_multiplier(const Field& jphi, const PotentialParams& p, double m);

struct ConvergenceRow {
  double t = 0.0;
  double grad_mu = 0.0;   // ‖∇μ(t)‖
  double distance = 0.0;  // ‖φ(t) - φ∞‖
  double energy = 0.0;
};

struct ConvergenceOptions {
  double tail_start_fraction = 0.1;  // tail is t >= fraction · T
  double distance_floor = 1e-12;     // increases below this are rounding noise
  double energy_rel_tol = 1e-12;
  double energy_abs_tol = 1e-13;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  double energy_inf = 0.0;
  double final_grad_mu = 0.0;
  double final_distance = 0.0;
  bool distance_monotone_in_tail = false;
  bool energy_above_limit = false;  // E(φ(t)) >= E(φ∞) - tol for every row
  bool energy_nonincreasing = false;
};

ConvergenceReport monitor_convergence(std::span<const TimedField> snapshots, const Field& phi_inf,
                                      const Kernel& k, const PotentialParams& p,
                                      const ConvergenceOptions& options = {});

}  // namespace nlch
