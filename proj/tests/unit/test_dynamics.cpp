#include <gtest/gtest.h>

#include <cmath>

#include "nlch/dynamics.hpp"
#include "nlch/error.hpp"
#include "test_support.hpp"

namespace nlch {
namespace {

using testing::random_field;

// Unit-mass-like gaussian with ∫J = 2 on the line, so ᾱ = 1 sits in the
// spinodal regime.
Kernel spinodal_kernel(const Grid& g) {
  return build_kernel(KernelFamily::gaussian, {7.978845608028654, 0.1, 0.0}, g);
}

const PotentialParams kPot{1.0, 2.0};

TEST(InitState, ZeroConstant) {
  const Grid g(1, 32, 1.0);
  const Kernel k = spinodal_kernel(g);
  const SimState s = init_state(g, k, kPot, NoisyConstant{0.0, 0.0, 1}, 0.01);
  EXPECT_EQ(s.t, 0.0);
  EXPECT_EQ(s.dissipation_accum, 0.0);
  EXPECT_EQ(s.step_count, 0);
  for (double v : s.phi.values()) EXPECT_EQ(v, 0.0);
  for (double v : s.mu.values()) EXPECT_EQ(v, 0.0);
}

TEST(InitState, UniformChemicalPotential) {
  const Grid g(2, 16, 1.0);
  const Kernel k = build_kernel(KernelFamily::exponential, {3.0, 0.1, 0.0}, g);
  const SimState s = init_state(g, k, kPot, NoisyConstant{0.3, 0.0, 1}, 0.01);
  const double expected = std::atanh(0.3) - 0.3 * k.j_integral();
  for (double v : s.mu.values()) EXPECT_NEAR(v, expected, 1e-13);
}

TEST(InitState, NoiseIsRecentered) {
  const Grid g(1, 128, 1.0);
  const Kernel k = spinodal_kernel(g);
  const SimState s = init_state(g, k, kPot, NoisyConstant{0.0, 0.05, 42}, 0.01);
  EXPECT_NEAR(mean(s.phi), 0.0, 1e-15);
  EXPECT_LE(lp_norm(s.phi, kInfNorm), 0.1);
  EXPECT_GT(s.phi.max() - s.phi.min(), 0.05);
  // Same seed, same field.
  const SimState again = init_state(g, k, kPot, NoisyConstant{0.0, 0.05, 42}, 0.01);
  for (std::size_t i = 0; i < s.phi.size(); ++i) EXPECT_EQ(s.phi[i], again.phi[i]);
}

TEST(InitState, TanhProfileIsCentred) {
  const Grid g(2, 32, 1.0);
  const Kernel k = build_kernel(KernelFamily::gaussian, {1.0, 0.1, 0.0}, g);
  const SimState s = init_state(g, k, kPot, TanhProfile{0.9, 0.25, 0.05}, 0.01);
  EXPECT_NEAR(s.phi[16 * 32 + 16], 0.9 * std::tanh(5.0), 1e-14);
  EXPECT_NEAR(s.phi[0], 0.9 * std::tanh((0.25 - std::sqrt(0.5)) / 0.05), 1e-14);
}

TEST(InitState, Rejections) {
  const Grid g(1, 16, 1.0);
  const Kernel k = spinodal_kernel(g);
  EXPECT_THROW(init_state(g, k, kPot, NoisyConstant{1.0, 0.0, 0}, 0.01), InvalidArgument);
  EXPECT_THROW(init_state(g, k, kPot, NoisyConstant{-1.2, 0.0, 0}, 0.01), InvalidArgument);
  EXPECT_THROW(init_state(g, k, kPot, NoisyConstant{0.9, 0.2, 0}, 0.01), InvalidArgument);
  EXPECT_THROW(init_state(g, k, kPot, FieldData{Field(Grid(1, 32, 1.0))}, 0.01), InvalidArgument);
  Field wide(g, 0.0);
  wide[3] = 0.999;
  EXPECT_THROW(init_state(g, k, kPot, FieldData{wide}, 0.01), InvalidArgument);
}

TEST(StepperConfig, Validation) {
  EXPECT_NO_THROW(validate(StepperConfig{}));
  EXPECT_THROW(validate(StepperConfig{1e-4, 0.0}), InvalidArgument);
  EXPECT_THROW(validate(StepperConfig{1e-6, 1e-5}), InvalidArgument);
  EXPECT_THROW(validate(StepperConfig{1e-4, 1e-10, 1e-10, 200, 1e-6}), InvalidArgument);
  EXPECT_THROW(validate(StepperConfig{1e-4, 1e-10, 0.0}), InvalidArgument);
  EXPECT_THROW(validate(StepperConfig{1e-4, 1e-10, 1e-10, 0}), InvalidArgument);
}

TEST(Step, ConstantIsExactFixedPoint) {
  const Grid g(2, 16, 1.0);
  const Kernel k = build_kernel(KernelFamily::gaussian, {20.0, 0.1, 0.0}, g);
  SimState s = init_state(g, k, kPot, NoisyConstant{-0.4, 0.0, 0}, 0.01);
  const StepperConfig cfg{1e-2};
  for (int n = 0; n < 5; ++n) step(s, cfg, k, kPot);
  for (double v : s.phi.values()) EXPECT_EQ(v, -0.4);
  const double mu0 = s.mu[0];
  for (double v : s.mu.values()) EXPECT_EQ(v, mu0);
  EXPECT_EQ(s.step_count, 5);
  EXPECT_NEAR(s.t, 5e-2, 1e-16);
  EXPECT_EQ(s.dissipation_accum, 0.0);
}

TEST(Step, PreservesMassOnRandomData) {
  const Grid g(2, 32, 1.0);
  const Kernel k = build_kernel(KernelFamily::gaussian, {60.0, 0.05, 0.0}, g);
  for (int seed = 0; seed < 5; ++seed) {
    const Field phi0 = random_field(g, 40 + seed, -0.8, 0.8);
    SimState s = init_state(g, k, kPot, FieldData{phi0}, 0.01);
    const double m0 = mean(s.phi);
    const StepperConfig cfg{1e-4};
    for (int n = 0; n < 3; ++n) {
      step(s, cfg, k, kPot);
      EXPECT_NEAR(mean(s.phi), m0, 1e-13);
      EXPECT_LT(lp_norm(s.phi, kInfNorm), 1.0 - cfg.safety_margin);
    }
  }
}

TEST(Step, EnergyNonincreasingOver100Steps) {
  const Grid g(1, 64, 1.0);
  const Kernel k = spinodal_kernel(g);
  SimState s = init_state(g, k, kPot, NoisyConstant{0.0, 0.05, 42}, 0.01);
  const StepperConfig cfg{1e-3};
  Stepper stepper(k, kPot, cfg);
  double e_prev = energy(s.phi, k, kPot);
  for (int n = 0; n < 100; ++n) {
    const StepReport rep = stepper.step(s, cfg.dt);
    EXPECT_EQ(rep.dt_halvings, 0);
    const double e = energy(s.phi, k, kPot);
    EXPECT_LE(e, e_prev + 1e-12 * std::abs(e_prev) + 1e-13) << "step " << n;
    e_prev = e;
  }
}

TEST(Step, DissipationMatchesChemicalPotentialGradient) {
  const Grid g(1, 64, 1.0);
  const Kernel k = spinodal_kernel(g);
  SimState s = init_state(g, k, kPot, NoisyConstant{0.0, 0.05, 3}, 0.01);
  step(s, StepperConfig{1e-3}, k, kPot);
  EXPECT_NEAR(s.dissipation_accum, 1e-3 * h1_seminorm_sq_spectral(s.mu), 1e-18);
  const Field mu = chemical_potential(s.phi, k, kPot);
  for (std::size_t i = 0; i < mu.size(); ++i) EXPECT_NEAR(s.mu[i], mu[i], 1e-14);
}

TEST(Step, FailsAtMinimumTimeStep) {
  const Grid g(1, 64, 1.0);
  const Kernel k = spinodal_kernel(g);
  SimState s = init_state(g, k, kPot, NoisyConstant{0.0, 0.05, 42}, 0.01);
  // One inner iteration can never meet a 1e-30 increment.
  const StepperConfig cfg{1e-3, 2.5e-4, 1e-30, 1};
  EXPECT_THROW(step(s, cfg, k, kPot), NumericalError);
  EXPECT_EQ(s.step_count, 0);
}

TEST(Step, RejectsNonpositiveDt) {
  const Grid g(1, 16, 1.0);
  const Kernel k = spinodal_kernel(g);
  SimState s = init_state(g, k, kPot, NoisyConstant{0.0, 0.0, 0}, 0.01);
  Stepper stepper(k, kPot, StepperConfig{});
  EXPECT_THROW(stepper.step(s, 0.0), InvalidArgument);
}

TEST(Run, NoStepsWhenAlreadyAtEnd) {
  const Grid g(1, 16, 1.0);
  const Kernel k = spinodal_kernel(g);
  const SimState s = init_state(g, k, kPot, NoisyConstant{0.0, 0.05, 1}, 0.01);
  const RunResult r = run(s, 0.0, StepperConfig{1e-3}, k, kPot);
  EXPECT_TRUE(r.series.rows.empty());
  EXPECT_EQ(r.state.step_count, 0);
  EXPECT_THROW(run(s, -1.0, StepperConfig{1e-3}, k, kPot), InvalidArgument);
}

TEST(Run, SpinodalRunStaysSeparatedAndConserves) {
  const Grid g(1, 128, 1.0);
  const Kernel k = spinodal_kernel(g);
  const SimState s = init_state(g, k, kPot, NoisyConstant{0.0, 0.05, 42}, 0.01);
  RunOptions opt;
  int snapshots = 0;
  opt.snapshot_stride = 100;
  opt.on_snapshot = [&](const SimState&) { ++snapshots; };
  const RunResult r = run(s, 1.0, StepperConfig{1e-3}, k, kPot, opt);
  ASSERT_EQ(r.series.rows.size(), 1001u);
  EXPECT_EQ(snapshots, 11);
  EXPECT_EQ(r.state.t, 1.0);
  double min_sep = 1.0;
  for (std::size_t i = 0; i < r.series.rows.size(); ++i) {
    const DiagnosticsRow& row = r.series.rows[i];
    min_sep = std::min(min_sep, row.delta_sep);
    EXPECT_NEAR(row.mass, r.series.initial_mass, 1e-12);
    if (i > 0) {
      const double e = r.series.rows[i - 1].energy;
      EXPECT_LE(row.energy, e + 1e-12 * std::abs(e) + 1e-13);
    }
  }
  EXPECT_GT(min_sep, 0.0);
  // The run actually separated.
  EXPECT_GT(r.state.phi.max() - r.state.phi.min(), 1.0);
}

TEST(Run, RowStrideIncludesEnd) {
  const Grid g(1, 32, 1.0);
  const Kernel k = spinodal_kernel(g);
  const SimState s = init_state(g, k, kPot, NoisyConstant{0.0, 0.05, 9}, 0.01);
  RunOptions opt;
  opt.row_stride = 4;
  std::vector<double> seen;
  opt.on_row = [&](const DiagnosticsRow& row) { seen.push_back(row.t); };
  const RunResult r = run(s, 0.01, StepperConfig{1e-3}, k, kPot, opt);
  ASSERT_EQ(seen.size(), r.series.rows.size());
  EXPECT_EQ(seen.front(), 0.0);
  EXPECT_EQ(seen.back(), 0.01);
  EXPECT_EQ(r.state.step_count, 10);
}

double residual_at(double dt) {
  const Grid g(1, 128, 1.0);
  const Kernel k = spinodal_kernel(g);
  const SimState s = init_state(g, k, kPot, NoisyConstant{0.0, 0.05, 42}, 0.01);
  RunOptions opt;
  opt.row_stride = 1 << 30;
  const RunResult r = run(s, 0.5, StepperConfig{dt}, k, kPot, opt);
  return std::abs(r.series.rows.back().energy_residual);
}

TEST(Run, EnergyResidualHalvesWithTimeStep) {
  const double coarse = residual_at(2e-3);
  const double fine = residual_at(1e-3);
  const double factor = coarse / fine;
  EXPECT_GE(factor, 1.5);
  EXPECT_LE(factor, 2.5);
}

}  // namespace
}  // namespace nlch
