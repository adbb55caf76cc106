#pragma once

#include <span>
#include <vector>

#include "nlch/field.hpp"
#include "nlch/potential.hpp"

namespace nlch {

struct LemmaRow {
  int n = 0;
  double y = 0.0;      // equality iteration y_{n+1} = C bⁿ y_n^{1+ε}
  double bound = 0.0;  // θ b^{-n/ε}
};

struct LemmaReport {
  double theta = 0.0;  // C^{-1/ε} b^{-1/ε²}
  bool threshold_exceeded = false;
  std::vector<LemmaRow> rows;  // n = 0..n_max
  int violations = 0;          // rows with y > bound beyond rounding (only when y0 <= θ)
};

/// Geometric convergence bound for y_{n+1} <= C bⁿ y_n^{1+ε}. The sequence
/// is iterated in log space; a violation is counted only when the excess
/// exceeds a running bound on the accumulated rounding error.
LemmaReport lemma_conv_bound(double C, double b, double eps, double y0, int n_max);

struct LevelSequence {
  std::vector<double> k;    // k_n = 1 - δ - δ/2ⁿ as computed in double
  std::vector<double> gap;  // δ/2ⁿ, exact
  /// Largest n such that k_0 < ... < k_n strictly in double precision.
  int strict_until = 0;
};

/// Truncation levels increasing from k_0 = 1 - 2δ towards 1 - δ.
LevelSequence level_sequence(double delta, int n_max);

struct TimedField {
  double t = 0.0;
  Field phi;
};

struct YnMeasurement {
  std::vector<double> y;       // y_0..y_{n_used}
  std::vector<double> levels;  // k_0..k_{n_used}
  int n_requested = 0;
  int n_cap = 0;              // largest stride-resolvable n
  double tau_window = 0.0;    // window / 3
  double dt_snapshot = 0.0;
  double t_end = 0.0;         // T, the last snapshot time
  std::size_t snapshots_used = 0;
};

/// Space-time measures y_n = Σ_{t ∈ I_n} |{φ(t) >= k_n}| Δt over the window
/// [T - window, T], with I_n = [t_{n-1}, T], t_{-1} = T - window and
/// t_n = t_{n-1} + (window/3)/2ⁿ. Requires at least two snapshots in the
/// window at uniform stride; n is capped where the subdivision step drops
/// below the stride.
YnMeasurement measure_yn(std::span<const TimedField> snapshots, double delta, int n_max,
                         double window);

struct DeGiorgiParams {
  double delta = 0.05;
  double alpha_bar = 1.0;
  double grad_j_l1 = 1.0;
  double c_hat = 1.0;
  double c_p = 1.0;
  double c_tau = 1.0;
};

/// All positive and delta < 1/4.
void validate(const DeGiorgiParams& params);

/// τ̃ = 2^{-20} δ⁵ F''(1-2δ)⁴ F'(1-2δ) / (3 C(τ) ‖∇J‖⁵ Ĉ^{3/2} (1+C_P²)^{3/2}).
double tau_tilde(const DeGiorgiParams& params);

struct RecursionCoefficient {
  double c_rec = 0.0;  // 2^{9/2} ‖∇J‖³ Ĉ^{9/10} (1+C_P²)^{9/10} / (δ³ F''(1-2δ)^{12/5})
  double b = 0.0;      // 2^{9/2}
  double eps = 0.0;    // 3/5
  double threshold = 0.0;  // 2^{-20} δ⁵ F''(1-2δ)⁴ / (‖∇J‖⁵ Ĉ^{3/2} (1+C_P²)^{3/2})
};

RecursionCoefficient recursion_coefficient(const DeGiorgiParams& params);

/// C(τ) estimate: max over snapshots of ‖F'(φ)‖_{L¹}.
double estimate_c_tau(std::span<const TimedField> snapshots, const PotentialParams& p);

struct PhaseCheck {
  YnMeasurement measured;
  std::vector<double> bound;  // θ b^{-n/ε} for the measured indices
  bool threshold_exceeded = false;
  bool bound_holds = false;   // measured y_n <= bound for every n (meaningful when y_0 <= θ)
  bool nonincreasing = false;
  double superlevel_measure = 0.0;  // space-time measure of {±φ >= 1 - δ} in the window
};

struct SchemeReport {
  double tau_tilde = 0.0;
  RecursionCoefficient recursion;
  PhaseCheck upper;  // φ
  PhaseCheck lower;  // -φ
  bool separated = false;  // both superlevel measures vanish
};

/// Runs the level-set measurement on φ and -φ and compares it with the
/// theoretical recursion bound. Threshold failures are reported, not thrown.
SchemeReport verify_scheme_on_trajectory(std::span<const TimedField> snapshots,
                                         const DeGiorgiParams& params, double window, int n_max);

}  // namespace nlch
