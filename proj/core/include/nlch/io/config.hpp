#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "nlch/dynamics.hpp"
#include "nlch/equilibrium.hpp"
#include "nlch/grid.hpp"
#include "nlch/kernel.hpp"
#include "nlch/potential.hpp"

namespace nlch::io {

struct GridConfig {
  int dim = 1;
  int n = 128;
  double length = 1.0;
  bool operator==(const GridConfig&) const = default;
};

struct KernelConfig {
  KernelFamily family = KernelFamily::gaussian;
  KernelParams params;
  bool operator==(const KernelConfig&) const = default;
};

enum class InitialMode { constant, tanh, snapshot };

struct InitialConfig {
  InitialMode mode = InitialMode::constant;
  double m = 0.0;
  double noise_amplitude = 0.0;
  std::uint64_t seed = 0;
  double delta0 = 0.01;
  double amplitude = 0.9;  // tanh profile
  double width = 0.05;
  double radius = 0.25;
  std::string snapshot;  // path, snapshot mode only
  bool operator==(const InitialConfig&) const = default;
};

struct OutputConfig {
  std::string directory = "out";
  int snapshot_stride = 0;  // steps between snapshots, 0 disables
  int csv_stride = 1;       // steps between CSV rows
  bool operator==(const OutputConfig&) const = default;
};

struct DeGiorgiConfig {
  double delta = 0.05;
  int n_max = 8;
  double window = 0.0;  // 0 selects the whole snapshot span
  bool operator==(const DeGiorgiConfig&) const = default;
};

/// Everything a subcommand needs. Required keys: grid.dim, grid.n,
/// grid.length, kernel.family, potential.alpha_bar, potential.alpha0,
/// run.t_end; all other keys have defaults.
struct RunConfig {
  GridConfig grid;
  KernelConfig kernel;
  PotentialParams potential;
  InitialConfig initial;
  StepperConfig stepper;
  OutputConfig output;
  double t_end = 1.0;
  DeGiorgiConfig degiorgi;
  EquilibriumOptions equilibrium;
  bool operator==(const RunConfig&) const = default;
};

/// Parses the flat `section.key = value` format (`#` starts a comment).
/// Throws ConfigError naming the line for syntax errors and the key path
/// for unknown keys, missing required keys and constraint violations.
RunConfig parse_config(std::string_view text);

/// Reads and parses a file; IoError when it cannot be read.
RunConfig load_config(const std::string& path);

/// Emits every key, doubles in shortest round-trip form.
std::string serialize_config(const RunConfig& config);

/// Re-runs the cross-field checks of the owning modules.
void validate(const RunConfig& config);

Grid make_grid(const RunConfig& config);
Kernel make_kernel(const RunConfig& config);

std::string_view to_string(InitialMode mode) noexcept;

}  // namespace nlch::io
