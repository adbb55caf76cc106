#include "nlch/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlch/diagnostics.hpp"
#include "nlch/dynamics.hpp"
#include "nlch/error.hpp"
#include "nlch/spectral.hpp"

namespace nlch {

namespace {

double mapped_mean(const Field& jphi, const PotentialParams& p, double mu) {
  double sum = 0.0;
  for (double v : jphi.values()) sum += potential::derivative_inverse(p, v + mu);
  return sum / static_cast<double>(jphi.size());
}

}  // namespace

double solve_mass_multiplier(const Field& jphi, const PotentialParams& p, double m) {
  if (!(std::abs(m) < 1.0)) throw InvalidArgument("equilibrium: pure phase mean (|m| >= 1)");
  const double centre = p.alpha_bar * std::atanh(m);
  double lo = centre - jphi.max();
  double hi = centre - jphi.min();
  for (int i = 0; i < 200 && lo < hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (mapped_mean(jphi, p, mid) < m) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // Return whichever end of the collapsed bracket matches the mean better.
  return std::abs(mapped_mean(jphi, p, lo) - m) <= std::abs(mapped_mean(jphi, p, hi) - m) ? lo : hi;
}

EquilibriumResult solve_stationary(const Kernel& k, const PotentialParams& p, double m,
                                   const Field& guess, const EquilibriumOptions& options) {
  validate(p);
  require_same_grid(k.grid(), guess.grid(), "solve_stationary");
  if (!(std::abs(m) < 1.0)) throw InvalidArgument("equilibrium: pure phase mean (|m| >= 1)");
  if (!(lp_norm(guess, kInfNorm) < 1.0)) throw InvalidArgument("equilibrium: guess must satisfy |phi| < 1");
  if (!(options.tol > 0.0) || options.max_iters < 1 || !(options.omega > 0.0 && options.omega <= 1.0)) {
    throw InvalidArgument("equilibrium: need tol > 0, max_iters >= 1, omega in (0, 1]");
  }

  EquilibriumResult result{guess, 0.0, 0.0, 0.0, 0, 0.0, false, 0.0};
  Field phi = guess;
  Field mapped(guess.grid());
  double omega = options.omega;
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= options.max_iters; ++it) {
    const Field jphi = convolve(k, phi);
    const double mu = solve_mass_multiplier(jphi, p, m);
    double update = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
      mapped[i] = potential::derivative_inverse(p, jphi[i] + mu);
      update = std::max(update, std::abs(mapped[i] - phi[i]));
    }
    result.iterations = it;
    result.last_update = update;
    result.mu_inf = mu;
    if (update <= options.tol) {
      result.converged = true;
      phi = mapped;
      break;
    }
    if (update > previous) omega = std::max(0.5 * omega, 1e-3);
    previous = update;
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] += omega * (mapped[i] - phi[i]);
  }

  const Field jphi = convolve(k, phi);
  double residual = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    residual = std::max(residual, std::abs(potential::derivative(p, phi[i]) - jphi[i] - result.mu_inf));
  }
  result.residual_linf = residual;
  result.mass_error = std::abs(mean(phi) - m);
  result.separation_margin = separation_margin(phi);
  result.phi_inf = std::move(phi);
  return result;
}

ConvergenceReport monitor_convergence(std::span<const TimedField> snapshots, const Field& phi_inf,
                                      const Kernel& k, const PotentialParams& p,
                                      const ConvergenceOptions& options) {
  ConvergenceReport report;
  report.energy_inf = energy(phi_inf, k, p);
  if (snapshots.empty()) return report;
  for (const auto& s : snapshots) {
    const Field mu = chemical_potential(s.phi, k, p);
    report.rows.push_back({s.t, std::sqrt(h1_seminorm_sq(mu)), lp_norm(s.phi - phi_inf, 2.0),
                           energy(s.phi, k, p)});
  }
  const double t_final = snapshots.back().t;
  const double tail_start = snapshots.front().t + options.tail_start_fraction * (t_final - snapshots.front().t);
  report.final_grad_mu = report.rows.back().grad_mu;
  report.final_distance = report.rows.back().distance;
  report.distance_monotone_in_tail = true;
  report.energy_above_limit = true;
  report.energy_nonincreasing = true;
  const double limit_tol = options.energy_rel_tol * std::abs(report.energy_inf) + options.energy_abs_tol;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    if (r.energy < report.energy_inf - limit_tol) report.energy_above_limit = false;
    if (i == 0) continue;
    const auto& prev = report.rows[i - 1];
    const double tol = options.energy_rel_tol * std::abs(prev.energy) + options.energy_abs_tol;
    if (r.energy > prev.energy + tol) report.energy_nonincreasing = false;
    if (prev.t >= tail_start && r.distance > prev.distance + options.distance_floor) {
      report.distance_monotone_in_tail = false;
    }
  }
  return report;
}

}  // namespace nlch
