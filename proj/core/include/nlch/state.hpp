#pragma once

#include <cstdint>

#include "nlch/field.hpp"

namespace nlch {

/// Simulation state owned by a single driver.
struct SimState {
  double t = 0.0;
  Field phi;
  Field mu;                        // F'(phi) - J*phi
  double dissipation_accum = 0.0;  // Σ Δt ‖∇μ‖²
  std::int64_t step_count = 0;
};

}  // namespace nlch
