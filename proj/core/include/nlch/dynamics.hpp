#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "nlch/diagnostics.hpp"
#include "nlch/field.hpp"
#include "nlch/grid.hpp"
#include "nlch/kernel.hpp"
#include "nlch/potential.hpp"
#include "nlch/state.hpp"

namespace nlch {

struct StepperConfig {
  double dt = 1e-4;
  double dt_min = 1e-10;
  double inner_tol = 1e-10;  // sup-norm increment
  int inner_max_iters = 200;
  double safety_margin = 1e-12;  // iterates stay in |φ| <= 1 - safety_margin

  bool operator==(const StepperConfig&) const = default;
};

/// Throws InvalidArgument unless dt >= dt_min > 0, 0 < safety_margin < 1e-6,
/// inner_tol > 0 and inner_max_iters >= 1.
void validate(const StepperConfig& cfg);

/// φ₀ = m + a·ξ with ξ uniform in [-1, 1) from a seeded mt19937_64 stream,
/// then shifted so that mean(φ₀) = m.
struct NoisyConstant {
  double m = 0.0;
  double noise_amplitude = 0.0;
  std::uint64_t seed = 0;
};

/// φ₀(x) = amplitude · tanh((radius - |x - c|) / width), c the box centre.
struct TanhProfile {
  double amplitude = 0.9;
  double radius = 0.25;
  double width = 0.05;
};

/// Field loaded from a snapshot (the caller does the I/O).
struct FieldData {
  Field phi;
};

using InitialData = std::variant<NoisyConstant, TanhProfile, FieldData>;

/// Builds the t = 0 state and its chemical potential. Rejects |mean| >= 1
/// ("pure phase mean"), fields with ‖φ₀‖_∞ > 1 - delta0, and grid mismatch.
SimState init_state(const Grid& grid, const Kernel& k, const PotentialParams& p,
                    const InitialData& initial, double delta0);

/// μ = F'(φ) - J∗φ.
Field chemical_potential(const Field& phi, const Kernel& k, const PotentialParams& p);

struct StepReport {
  int inner_iters = 0;  // iterations of the accepted attempt
  double dt_used = 0.0;
  int dt_halvings = 0;
};

/// Convex-splitting step solved by a stabilized fixed point; keeps reusable
/// transform buffers for one grid.
class Stepper {
 public:
  Stepper(const Kernel& k, const PotentialParams& p, const StepperConfig& cfg);
  ~Stepper();
  Stepper(Stepper&&) noexcept;
  Stepper& operator=(Stepper&&) noexcept;

  /// Advances `state` by dt (halving on inner failure). Throws
  /// NumericalError when the inner solve fails at dt_min.
  StepReport step(SimState& state, double dt);

  const StepperConfig& config() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One step with cfg.dt.
StepReport step(SimState& state, const StepperConfig& cfg, const Kernel& k,
                const PotentialParams& p);

struct TimeSeries {
  std::vector<DiagnosticsRow> rows;
  double initial_mass = 0.0;
  double initial_energy = 0.0;
};

struct RunOptions {
  int row_stride = 1;       // emit a row every this many steps (and at the end)
  int snapshot_stride = 0;  // 0 disables snapshots
  bool check_invariants = true;
  double mass_tol = 1e-12;
  double energy_rel_tol = 1e-12;
  double energy_abs_tol = 1e-13;
  std::function<void(const DiagnosticsRow&)> on_row;
  std::function<void(const SimState&)> on_snapshot;
};

struct RunResult {
  SimState state;
  TimeSeries series;
};

/// Steps until t_end. With check_invariants the mass, the strict bound and
/// the per-step energy decrease are verified after every step; a failure
/// throws NumericalError carrying a dump of the offending step. No steps
/// and no rows when t_end equals state.t.
RunResult run(SimState state, double t_end, const StepperConfig& cfg, const Kernel& k,
              const PotentialParams& p, const RunOptions& options = {});

}  // namespace nlch
