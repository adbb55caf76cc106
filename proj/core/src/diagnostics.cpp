#include "nlch/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "nlch/error.hpp"
#include "nlch/spectral.hpp"

namespace nlch {

namespace {

double potential_sum(const Field& phi, const PotentialParams& p) {
  double sum = 0.0;
  for (double v : phi.values()) sum += potential::value(p, v);
  return sum;
}

}  // namespace

double energy(const Field& phi, const Kernel& k, const PotentialParams& p) {
  const Field jphi = convolve(k, phi);
  double pair = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) pair += phi[i] * jphi[i];
  const double dv = phi.grid().cell_volume();
  return (-0.5 * pair + potential_sum(phi, p)) * dv;
}

double energy_alt(const Field& phi, const Kernel& k, const PotentialParams& p) {
  const Field jphi = convolve(k, phi);
  const double a = k.j_integral();
  double squares = 0.0;
  double pair = 0.0;
  double local = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    squares += phi[i] * phi[i];
    pair += phi[i] * jphi[i];
    local += potential::value(p, phi[i]) - 0.5 * a * phi[i] * phi[i];
  }
  const double dv = phi.grid().cell_volume();
  const double difference_part = 0.5 * a * squares * dv - 0.5 * pair * dv;
  return difference_part + local * dv;
}

double separation_margin(const Field& phi) { return 1.0 - lp_norm(phi, kInfNorm); }

double gn_ratio(const Field& u) {
  const double l2 = lp_norm(u, 2.0);
  if (!(l2 > 0.0)) throw InvalidArgument("gn_ratio: zero field");
  const double v = std::sqrt(l2 * l2 + h1_seminorm_sq_spectral(u));
  return lp_norm(u, 10.0 / 3.0) / (std::pow(l2, 0.4) * std::pow(v, 0.6));
}

namespace {

std::optional<double> truncation_ratio(const Field& truncated) {
  const double l2 = lp_norm(truncated, 2.0);
  if (l2 == 0.0) return std::nullopt;
  const double grad = std::sqrt(fd_gradient_norm_sq(truncated));
  // Relative test: a round-off sliver just above ρ is still a valid probe.
  if (grad <= 1e-12 * l2) {
    throw NumericalError("poincare_ratio: truncation is a nonzero constant (no vanishing set)");
  }
  return l2 / grad;
}

void require_level(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw InvalidArgument("poincare_ratio: rho must lie in (0, 1)");
}

}  // namespace

std::optional<double> poincare_ratio(const Field& phi, double rho) {
  require_level(rho);
  return truncation_ratio(truncate_above(phi, rho));
}

std::optional<double> poincare_ratio_lower(const Field& phi, double rho) {
  require_level(rho);
  return truncation_ratio(truncate_below(phi, rho));
}

double mu_linf(const SimState& state) { return lp_norm(state.mu, kInfNorm); }

DiagnosticsRow make_row(const SimState& state, const Kernel& k, const PotentialParams& p,
                        double initial_energy, int inner_iters, double dt_used) {
  DiagnosticsRow row;
  row.t = state.t;
  row.mass = mean(state.phi);
  row.energy = energy(state.phi, k, p);
  row.energy_alt = energy_alt(state.phi, k, p);
  row.dissipation_accum = state.dissipation_accum;
  row.energy_residual = row.energy + state.dissipation_accum - initial_energy;
  row.min_phi = state.phi.min();
  row.max_phi = state.phi.max();
  row.delta_sep = 1.0 - std::max(std::abs(row.min_phi), std::abs(row.max_phi));
  row.mu_linf = mu_linf(state);
  row.inner_iters = inner_iters;
  row.dt_used = dt_used;
  return row;
}

PoincareEstimate estimate_c_p(std::span<const Field> fields, double rho_lo, double rho_hi,
                              int n_rho) {
  if (n_rho < 1 || !(rho_lo <= rho_hi)) {
    throw InvalidArgument("estimate_c_p: need n_rho >= 1 and rho_lo <= rho_hi");
  }
  PoincareEstimate est;
  for (const Field& phi : fields) {
    for (int j = 0; j < n_rho; ++j) {
      const double rho = n_rho == 1 ? rho_lo : rho_lo + (rho_hi - rho_lo) * j / (n_rho - 1);
      for (const auto& r : {poincare_ratio(phi, rho), poincare_ratio_lower(phi, rho)}) {
        if (r) {
          est.c_p = std::max(est.c_p, *r);
          ++est.evaluated;
        } else {
          ++est.absent;
        }
      }
    }
  }
  return est;
}

double estimate_c_hat(std::span<const Field> probes) {
  double best = 0.0;
  for (const Field& u : probes) {
    if (lp_norm(u, kInfNorm) == 0.0) continue;
    best = std::max(best, gn_ratio(u));
  }
  return best;
}

}  // namespace nlch
