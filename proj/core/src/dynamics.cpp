#include "nlch/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <random>

#include "nlch/aligned.hpp"
#include "nlch/error.hpp"
#include "nlch/spectral.hpp"

namespace nlch {

void validate(const StepperConfig& cfg) {
  if (!(std::isfinite(cfg.dt_min) && cfg.dt_min > 0.0)) {
    throw InvalidArgument("stepper: dt_min must be positive");
  }
  if (!(std::isfinite(cfg.dt) && cfg.dt >= cfg.dt_min)) {
    throw InvalidArgument("stepper: dt must be >= dt_min");
  }
  if (!(cfg.safety_margin > 0.0 && cfg.safety_margin < 1e-6)) {
    throw InvalidArgument("stepper: safety_margin must lie in (0, 1e-6)");
  }
  if (!(cfg.inner_tol > 0.0)) throw InvalidArgument("stepper: inner_tol must be positive");
  if (cfg.inner_max_iters < 1) throw InvalidArgument("stepper: inner_max_iters must be >= 1");
}

Field chemical_potential(const Field& phi, const Kernel& k, const PotentialParams& p) {
  Field mu = convolve(k, phi);
  for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = potential::derivative(p, phi[i]) - mu[i];
  return mu;
}

namespace {

Field noisy_constant(const Grid& grid, const NoisyConstant& init) {
  Field phi(grid, init.m);
  if (init.noise_amplitude == 0.0) return phi;
  std::mt19937_64 rng(init.seed);
  // 53 random bits mapped to [-1, 1); fixed here so runs are reproducible
  // across standard library implementations.
  Field noise(grid);
  for (double& v : noise.values()) {
    const double u = static_cast<double>(rng() >> 11) * 0x1p-53;
    v = init.noise_amplitude * (2.0 * u - 1.0);
  }
  const double shift = mean(noise);
  for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = init.m + (noise[i] - shift);
  return phi;
}

Field tanh_profile(const Grid& grid, const TanhProfile& init) {
  if (!(init.width > 0.0)) throw InvalidArgument("initial: tanh width must be positive");
  const double c = 0.5 * grid.edge_length();
  return Field::from_function(grid, [&](const std::array<double, 3>& x) {
    double r2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) r2 += (x[a] - c) * (x[a] - c);
    return init.amplitude * std::tanh((init.radius - std::sqrt(r2)) / init.width);
  });
}

}  // namespace

SimState init_state(const Grid& grid, const Kernel& k, const PotentialParams& p,
                    const InitialData& initial, double delta0) {
  validate(p);
  require_same_grid(grid, k.grid(), "init_state");
  if (!(delta0 > 0.0 && delta0 < 1.0)) throw InvalidArgument("initial: delta0 must lie in (0, 1)");
  const double bound = 1.0 - delta0;

  Field phi(grid);
  if (const auto* nc = std::get_if<NoisyConstant>(&initial)) {
    if (!(std::abs(nc->m) < 1.0)) throw InvalidArgument("initial: pure phase mean (|m| >= 1)");
    if (!(nc->noise_amplitude >= 0.0)) {
      throw InvalidArgument("initial: noise amplitude must be nonnegative");
    }
    if (std::abs(nc->m) + nc->noise_amplitude > bound) {
      throw InvalidArgument("initial: |m| + noise amplitude exceeds 1 - delta0");
    }
    phi = noisy_constant(grid, *nc);
  } else if (const auto* tp = std::get_if<TanhProfile>(&initial)) {
    phi = tanh_profile(grid, *tp);
  } else {
    const Field& given = std::get<FieldData>(initial).phi;
    if (!(given.grid() == grid)) throw InvalidArgument("initial: snapshot grid mismatch");
    phi = given;
  }

  if (!phi.all_finite()) throw InvalidArgument("initial: non-finite values");
  if (!(std::abs(mean(phi)) < 1.0)) throw InvalidArgument("initial: pure phase mean (|m| >= 1)");
  if (lp_norm(phi, kInfNorm) > bound) {
    throw InvalidArgument("initial: sup norm exceeds 1 - delta0");
  }
  SimState state{0.0, phi, chemical_potential(phi, k, p), 0.0, 0};
  return state;
}

struct Stepper::Impl {
  const Kernel* kernel;
  PotentialParams pot;
  StepperConfig cfg;
  Grid grid;
  Fft fft;
  std::shared_ptr<const WaveTable> waves;
  std::vector<double> conv;  // multiplier · cell_volume
  AlignedVector<Complex> phin_hat, rhs_hat, work_hat;
  AlignedVector<double> cur, next, g;

  Impl(const Kernel& k, const PotentialParams& p, const StepperConfig& c)
      : kernel(&k), pot(p), cfg(c), grid(k.grid()), fft(k.grid()), waves(wave_table(k.grid())) {
    validate(p);
    validate(c);
    const std::size_t ns = grid.spectral_size();
    const std::size_t n = grid.size();
    conv.resize(ns);
    for (std::size_t s = 0; s < ns; ++s) conv[s] = k.spectral_multiplier()[s] * grid.cell_volume();
    phin_hat.resize(ns);
    rhs_hat.resize(ns);
    work_hat.resize(ns);
    cur.resize(n);
    next.resize(n);
    g.resize(n);
  }

  // One convex-splitting solve with step dt starting from phi. On success
  // the result is left in `next`.
  bool solve(const Field& phi, double dt, int& iters) {
    const std::size_t n = grid.size();
    const std::size_t ns = grid.spectral_size();
    const double inv_n = 1.0 / static_cast<double>(n);
    const double limit = 1.0 - cfg.safety_margin;
    const auto& k2 = waves->k2;

    fft.forward(phi.data(), phin_hat.data());
    for (std::size_t s = 0; s < ns; ++s) rhs_hat[s] = phin_hat[s] * (1.0 + dt * k2[s] * conv[s]);
    std::copy(phi.values().begin(), phi.values().end(), cur.begin());

    for (iters = 1; iters <= cfg.inner_max_iters; ++iters) {
      double lm = pot.alpha_bar;
      for (std::size_t i = 0; i < n; ++i) {
        lm = std::max(lm, potential::second_derivative(pot, cur[i]));
      }
      for (std::size_t i = 0; i < n; ++i) g[i] = potential::derivative(pot, cur[i]) - lm * cur[i];
      fft.forward(g.data(), work_hat.data());
      for (std::size_t s = 0; s < ns; ++s) {
        const double a = dt * k2[s];
        work_hat[s] = (rhs_hat[s] - a * work_hat[s]) / (1.0 + a * lm);
      }
      fft.backward_destructive(work_hat.data(), next.data());

      double inc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        next[i] *= inv_n;
        inc = std::max(inc, std::abs(next[i] - cur[i]));
      }
      if (!std::isfinite(inc)) return false;

      // Shrink the update until the iterate is strictly inside (-1, 1).
      double theta = 1.0;
      auto outside = [&](double th) {
        for (std::size_t i = 0; i < n; ++i) {
          if (std::abs(cur[i] + th * (next[i] - cur[i])) > limit) return true;
        }
        return false;
      };
      int halvings = 0;
      while (outside(theta)) {
        if (++halvings > 30) return false;
        theta *= 0.5;
      }
      if (theta == 1.0 && inc <= cfg.inner_tol) return true;
      for (std::size_t i = 0; i < n; ++i) cur[i] += theta * (next[i] - cur[i]);
    }
    iters = cfg.inner_max_iters;
    return false;
  }

  void accept(SimState& state, double dt) {
    const std::size_t n = grid.size();
    const std::size_t ns = grid.spectral_size();
    const double inv_n = 1.0 / static_cast<double>(n);
    std::copy(next.begin(), next.end(), state.phi.values().begin());

    fft.forward(state.phi.data(), work_hat.data());
    for (std::size_t s = 0; s < ns; ++s) work_hat[s] *= conv[s];
    fft.backward_destructive(work_hat.data(), g.data());
    for (std::size_t i = 0; i < n; ++i) {
      state.mu[i] = potential::derivative(pot, state.phi[i]) - g[i] * inv_n;
    }

    fft.forward(state.mu.data(), work_hat.data());
    double grad_sq = 0.0;
    for (std::size_t s = 0; s < ns; ++s) {
      double kk = 0.0;
      for (const auto& d : waves->deriv) kk += d[s] * d[s];
      grad_sq += waves->weight[s] * kk * std::norm(work_hat[s]);
    }
    grad_sq *= grid.cell_volume() * inv_n;

    state.dissipation_accum += dt * grad_sq;
    state.t += dt;
    ++state.step_count;
  }
};

Stepper::Stepper(const Kernel& k, const PotentialParams& p, const StepperConfig& cfg)
    : impl_(std::make_unique<Impl>(k, p, cfg)) {}
Stepper::~Stepper() = default;
Stepper::Stepper(Stepper&&) noexcept = default;
Stepper& Stepper::operator=(Stepper&&) noexcept = default;

const StepperConfig& Stepper::config() const noexcept { return impl_->cfg; }

StepReport Stepper::step(SimState& state, double dt) {
  require_same_grid(state.phi.grid(), impl_->grid, "step");
  if (!(dt > 0.0)) throw InvalidArgument("step: dt must be positive");
  StepReport report;
  double trial = dt;
  while (true) {
    int iters = 0;
    if (impl_->solve(state.phi, trial, iters)) {
      impl_->accept(state, trial);
      report.inner_iters = iters;
      report.dt_used = trial;
      return report;
    }
    if (trial * 0.5 < impl_->cfg.dt_min) {
      std::ostringstream msg;
      msg << "inner solver failed at t=" << state.t << " with dt=" << trial
          << " (dt_min=" << impl_->cfg.dt_min << ", " << iters << " iterations)";
      throw NumericalError(msg.str());
    }
    trial *= 0.5;
    ++report.dt_halvings;
  }
}

StepReport step(SimState& state, const StepperConfig& cfg, const Kernel& k,
                const PotentialParams& p) {
  Stepper stepper(k, p, cfg);
  return stepper.step(state, cfg.dt);
}

RunResult run(SimState state, double t_end, const StepperConfig& cfg, const Kernel& k,
              const PotentialParams& p, const RunOptions& options) {
  if (!(t_end >= state.t)) throw InvalidArgument("run: t_end precedes the current time");
  if (options.row_stride < 1) throw InvalidArgument("run: row_stride must be >= 1");
  Stepper stepper(k, p, cfg);

  RunResult result{std::move(state), {}};
  SimState& s = result.state;
  TimeSeries& series = result.series;
  series.initial_mass = mean(s.phi);
  series.initial_energy = energy(s.phi, k, p);

  auto emit = [&](const DiagnosticsRow& row) {
    series.rows.push_back(row);
    if (options.on_row) options.on_row(row);
  };
  const double stop_slack = 1e-10 * cfg.dt;
  if (t_end - s.t <= stop_slack) return result;

  emit(make_row(s, k, p, series.initial_energy, 0, 0.0));
  if (options.snapshot_stride > 0 && options.on_snapshot) options.on_snapshot(s);

  double previous_energy = series.initial_energy;
  const double limit = 1.0 - cfg.safety_margin;
  std::int64_t taken = 0;
  while (t_end - s.t > stop_slack) {
    const double remaining = t_end - s.t;
    const bool last = remaining <= cfg.dt * (1.0 + 1e-6);
    const StepReport rep = stepper.step(s, last ? remaining : cfg.dt);
    if (last && rep.dt_used == remaining) s.t = t_end;
    ++taken;

    const bool finished = t_end - s.t <= stop_slack;
    const bool want_row = taken % options.row_stride == 0 || finished;
    if (options.check_invariants) {
      const double e = energy(s.phi, k, p);
      const double drift = std::abs(mean(s.phi) - series.initial_mass);
      const double sup = lp_norm(s.phi, kInfNorm);
      const double rise = e - previous_energy;
      const double allowed = options.energy_rel_tol * std::abs(previous_energy) + options.energy_abs_tol;
      if (drift > options.mass_tol || sup > limit || rise > allowed) {
        std::ostringstream dump;
        dump.precision(17);
        dump << "monitor failure at step " << s.step_count << " t=" << s.t << " dt=" << rep.dt_used
             << ": mass drift " << drift << " (tol " << options.mass_tol << "), sup|phi| " << sup
             << " (limit " << limit << "), energy " << previous_energy << " -> " << e
             << " (allowed rise " << allowed << "), inner iterations " << rep.inner_iters;
        throw NumericalError(dump.str());
      }
      previous_energy = e;
    }
    if (want_row) emit(make_row(s, k, p, series.initial_energy, rep.inner_iters, rep.dt_used));
    if (options.snapshot_stride > 0 && options.on_snapshot && taken % options.snapshot_stride == 0) {
      options.on_snapshot(s);
    }
  }
  return result;
}

}  // namespace nlch
