#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nlch/dynamics.hpp"
#include "nlch/equilibrium.hpp"
#include "nlch/error.hpp"
#include "test_support.hpp"

namespace nlch {
namespace {

using testing::random_field;

const PotentialParams kPot{1.0, 2.0};

Kernel line_kernel(const Grid& g) {
  return build_kernel(KernelFamily::gaussian, {7.978845608028654, 0.1, 0.0}, g);
}

Field cosine_guess(const Grid& g) {
  return Field::from_function(g, [](const auto& x) { return 0.5 * std::cos(2 * std::numbers::pi * x[0]); });
}

TEST(Stationary, ConstantGuessIsExactFixedPoint) {
  const Grid g(2, 16, 1.0);
  const Kernel k = build_kernel(KernelFamily::exponential, {2.0, 0.1, 0.0}, g);
  const double m = 0.35;
  const EquilibriumResult r = solve_stationary(k, kPot, m, Field(g, m));
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.residual_linf, 1e-13);
  EXPECT_NEAR(r.mu_inf, std::atanh(m) - m * k.j_integral(), 1e-13);
  for (double v : r.phi_inf.values()) EXPECT_NEAR(v, m, 1e-14);
  EXPECT_LE(r.mass_error, 1e-14);
}

TEST(Stationary, SymmetricGuessGivesOddProfile) {
  const Grid g(1, 128, 1.0);
  const Kernel k = line_kernel(g);
  const EquilibriumResult r = solve_stationary(k, kPot, 0.0, cosine_guess(g));
  ASSERT_TRUE(r.converged);
  EXPECT_LE(r.mass_error, 1e-12);
  EXPECT_LE(r.residual_linf, 1e-10);
  EXPECT_GT(r.separation_margin, 0.0);
  // cos(2πx) is odd about x = 1/4; the iteration keeps that symmetry.
  const int n = 128;
  for (int i = 0; i < n; ++i) EXPECT_NEAR(r.phi_inf[((n / 2 - i) % n + n) % n], -r.phi_inf[i], 1e-10);
  // Phase separated, not the trivial constant.
  EXPECT_GT(r.phi_inf.max(), 0.9);
  EXPECT_NEAR(r.mu_inf, 0.0, 1e-10);
}

TEST(Stationary, ReconvergesFromItsOwnSolution) {
  const Grid g(1, 128, 1.0);
  const Kernel k = line_kernel(g);
  const EquilibriumResult first = solve_stationary(k, kPot, 0.0, cosine_guess(g));
  ASSERT_TRUE(first.converged);
  const EquilibriumResult again = solve_stationary(k, kPot, 0.0, first.phi_inf);
  EXPECT_TRUE(again.converged);
  EXPECT_LE(again.iterations, 2);
}

TEST(Stationary, NonzeroMeanOnSingleBumpGuess) {
  const Grid g(1, 64, 1.0);
  const Kernel k = line_kernel(g);
  Field guess = cosine_guess(g);
  for (double& v : guess.values()) v += 0.2;
  const EquilibriumResult r = solve_stationary(k, kPot, 0.2, guess);
  ASSERT_TRUE(r.converged);
  EXPECT_LE(r.mass_error, 1e-12);
  EXPECT_LE(r.residual_linf, 1e-10);
  EXPECT_GT(r.separation_margin, 0.0);
  const Field mu = chemical_potential(r.phi_inf, k, kPot);
  for (double v : mu.values()) EXPECT_NEAR(v, r.mu_inf, 1e-10);
}

TEST(Stationary, IterationBudgetIsReported) {
  const Grid g(1, 64, 1.0);
  const Kernel k = line_kernel(g);
  EquilibriumOptions opt;
  opt.max_iters = 2;
  const EquilibriumResult r = solve_stationary(k, kPot, 0.0, cosine_guess(g), opt);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 2);
  EXPECT_GT(r.last_update, opt.tol);
  EXPECT_GT(r.separation_margin, 0.0);
}

TEST(Stationary, Rejections) {
  const Grid g(1, 16, 1.0);
  const Kernel k = line_kernel(g);
  EXPECT_THROW(solve_stationary(k, kPot, 1.0, Field(g)), InvalidArgument);
  EXPECT_THROW(solve_stationary(k, kPot, 0.0, Field(Grid(1, 32, 1.0))), InvalidArgument);
  EquilibriumOptions bad;
  bad.omega = 0.0;
  EXPECT_THROW(solve_stationary(k, kPot, 0.0, Field(g), bad), InvalidArgument);
}

TEST(MassMultiplier, HitsTargetMean) {
  const Grid g(1, 64, 1.0);
  const Field jphi = random_field(g, 5, -2.0, 2.0);
  for (double m : {-0.9, -0.3, 0.0, 0.5, 0.95}) {
    const double mu = solve_mass_multiplier(jphi, kPot, m);
    double sum = 0.0;
    for (double v : jphi.values()) sum += std::tanh(v + mu);
    EXPECT_NEAR(sum / 64.0, m, 1e-13) << m;
    EXPECT_LE(mu, std::atanh(m) - jphi.min() + 1e-12);
    EXPECT_GE(mu, std::atanh(m) - jphi.max() - 1e-12);
  }
}

TEST(MassMultiplier, MonotoneInTarget) {
  const Grid g(1, 32, 1.0);
  const Field jphi = random_field(g, 6, -1.0, 1.0);
  double prev = -INFINITY;
  for (double m = -0.9; m < 0.9; m += 0.1) {
    const double mu = solve_mass_multiplier(jphi, kPot, m);
    EXPECT_GT(mu, prev);
    prev = mu;
  }
}

TEST(Monitor, ConstantEquilibriumTrajectory) {
  const Grid g(1, 32, 1.0);
  const Kernel k = line_kernel(g);
  std::vector<TimedField> traj;
  for (int i = 0; i <= 10; ++i) traj.push_back({0.1 * i, Field(g, 0.2)});
  const ConvergenceReport r = monitor_convergence(traj, Field(g, 0.2), k, kPot);
  ASSERT_EQ(r.rows.size(), 11u);
  for (const ConvergenceRow& row : r.rows) {
    EXPECT_LE(row.distance, 1e-12);
    EXPECT_EQ(row.grad_mu, 0.0);
  }
  EXPECT_TRUE(r.distance_monotone_in_tail);
  EXPECT_TRUE(r.energy_above_limit);
  EXPECT_TRUE(r.energy_nonincreasing);
}

TEST(Monitor, LongRunApproachesStationaryState) {
  const Grid g(1, 128, 1.0);
  const Kernel k = line_kernel(g);
  const SimState s = init_state(g, k, kPot, NoisyConstant{0.0, 0.05, 42}, 0.01);
  std::vector<TimedField> traj;
  RunOptions opt;
  opt.row_stride = 1 << 30;
  opt.snapshot_stride = 10;
  opt.on_snapshot = [&](const SimState& st) { traj.push_back({st.t, st.phi}); };
  const RunResult run_result = run(s, 2.0, StepperConfig{1e-3}, k, kPot, opt);
  const EquilibriumResult eq = solve_stationary(k, kPot, mean(run_result.state.phi), run_result.state.phi);
  ASSERT_TRUE(eq.converged);
  const ConvergenceReport r = monitor_convergence(traj, eq.phi_inf, k, kPot);
  EXPECT_LT(r.final_grad_mu, 1e-6);
  EXPECT_LT(r.final_distance, 1e-6);
  EXPECT_TRUE(r.distance_monotone_in_tail);
  EXPECT_TRUE(r.energy_above_limit);
  EXPECT_TRUE(r.energy_nonincreasing);
  EXPECT_LT(r.rows.back().distance, r.rows.front().distance);
}

}  // namespace
}  // namespace nlch
