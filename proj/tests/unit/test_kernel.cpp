#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nlch/error.hpp"
#include "nlch/kernel.hpp"
#include "nlch/spectral.hpp"
#include "test_support.hpp"

namespace nlch {
namespace {

using testing::random_field;
using testing::rel_diff;

constexpr double kPi = std::numbers::pi;

// Kernel formulas written out independently of the library.
double kernel_value(KernelFamily family, const KernelParams& p, double r) {
  switch (family) {
    case KernelFamily::gaussian: return p.amplitude * std::exp(-r * r / (2 * p.width * p.width));
    case KernelFamily::exponential: return p.amplitude * std::exp(-r / p.width);
    case KernelFamily::mollified_newtonian:
      return p.amplitude / (4 * kPi * std::max(r, p.mollification_radius));
  }
  return 0.0;
}

// O(N²) periodic sum Σ_j J(x_i - x_j) f_j h^d with minimum-image distances.
Field brute_force_convolution(KernelFamily family, const KernelParams& p, const Field& f) {
  const Grid& g = f.grid();
  const int n = g.n_per_axis();
  Field out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto xi = g.unflatten(i);
    double sum = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const auto xj = g.unflatten(j);
      double r2 = 0.0;
      for (int a = 0; a < g.dim(); ++a) {
        int d = ((xi[a] - xj[a]) % n + n) % n;
        if (d >= n / 2) d -= n;
        r2 += (d * g.spacing()) * (d * g.spacing());
      }
      sum += kernel_value(family, p, std::sqrt(r2)) * f[j];
    }
    out[i] = sum * g.cell_volume();
  }
  return out;
}

struct Case {
  KernelFamily family;
  KernelParams params;
};

std::vector<Case> families(const Grid& g) {
  const double h = g.spacing();
  return {{KernelFamily::gaussian, {1.3, g.edge_length() / 8, 0.0}},
          {KernelFamily::exponential, {0.7, g.edge_length() / 10, 0.0}},
          {KernelFamily::mollified_newtonian, {2.0, 0.0, 2.5 * h}}};
}

TEST(Kernel, GaussianIntegralMatchesTruncatedAnalyticValue) {
  for (int dim = 1; dim <= 3; ++dim) {
    const Grid g(dim, dim == 3 ? 32 : 64, 1.0);
    const double sigma = 0.1;
    const Kernel k = build_kernel(KernelFamily::gaussian, {1.5, sigma, 0.0}, g);
    // ∫ over the box [-L/2, L/2)^d of the Gaussian.
    const double per_axis = std::sqrt(2 * kPi) * sigma * std::erf(0.5 / (std::sqrt(2.0) * sigma));
    const double analytic = 1.5 * std::pow(per_axis, dim);
    EXPECT_LE(rel_diff(k.j_integral(), analytic), 1e-3) << "dim " << dim;
    EXPECT_LE(rel_diff(k.j_integral(), 1.5 * std::pow(2 * kPi * sigma * sigma, dim / 2.0)), 1e-3);
  }
}

TEST(Kernel, DcCoefficientIsSampleSum) {
  const Grid g(2, 16, 1.0);
  for (const auto& c : families(g)) {
    const Kernel k = build_kernel(c.family, c.params, g);
    EXPECT_LE(rel_diff(k.spectral_multiplier()[0] * g.cell_volume(), k.j_integral()), 1e-14);
  }
}

TEST(Kernel, SamplesAreExactlyEven) {
  for (int dim = 1; dim <= 3; ++dim) {
    const Grid g(dim, 8, 1.0);
    for (const auto& c : families(g)) {
      const Kernel k = build_kernel(c.family, c.params, g);
      const int n = g.n_per_axis();
      for (std::size_t i = 0; i < g.size(); ++i) {
        auto idx = g.unflatten(i);
        for (int a = 0; a < dim; ++a) idx[a] = (n - idx[a]) % n;
        EXPECT_EQ(k.samples()[i], k.samples()[g.flatten(idx)]);
      }
    }
  }
}

TEST(Kernel, MultiplierIsReal) {
  for (int dim = 1; dim <= 3; ++dim) {
    const Grid g(dim, 16, 1.0);
    for (const auto& c : families(g)) {
      const Kernel k = build_kernel(c.family, c.params, g);
      EXPECT_LE(k.spectral_imag_residual(), 1e-12) << to_string(c.family);
    }
  }
}

TEST(Kernel, SummariesArePositiveAndFinite) {
  const Grid g(3, 16, 1.0);
  for (const auto& c : families(g)) {
    const Kernel k = build_kernel(c.family, c.params, g);
    EXPECT_GT(k.j_integral(), 0.0);
    EXPECT_GT(k.grad_j_l1(), 0.0);
    EXPECT_TRUE(std::isfinite(k.j_integral()));
    EXPECT_TRUE(std::isfinite(k.grad_j_l1()));
  }
}

TEST(Kernel, GaussianGradientL1MatchesAnalyticValue) {
  // In 1D, ∫|J'| = 2 J(0) for a Gaussian decaying to ~0 at the box edge.
  const Grid g(1, 1024, 1.0);
  const Kernel k = build_kernel(KernelFamily::gaussian, {1.0, 0.05, 0.0}, g);
  EXPECT_NEAR(k.grad_j_l1(), 2.0, 1e-3);
}

TEST(Kernel, RejectsInvalidParameters) {
  const Grid g(1, 64, 1.0);
  EXPECT_THROW(build_kernel(KernelFamily::gaussian, {0.0, 0.1, 0.0}, g), InvalidArgument);
  EXPECT_THROW(build_kernel(KernelFamily::gaussian, {1.0, -0.1, 0.0}, g), InvalidArgument);
  EXPECT_THROW(build_kernel(KernelFamily::gaussian, {1.0, 0.2, 0.0}, g), InvalidArgument);
  EXPECT_THROW(build_kernel(KernelFamily::exponential, {1.0, 0.0, 0.0}, g), InvalidArgument);
  EXPECT_THROW(build_kernel(KernelFamily::mollified_newtonian, {1.0, 0.0, 1.5 / 64}, g), InvalidArgument);
  EXPECT_NO_THROW(build_kernel(KernelFamily::mollified_newtonian, {1.0, 0.0, 2.0 / 64}, g));
  EXPECT_THROW(parse_kernel_family("lorentzian"), InvalidArgument);
  EXPECT_EQ(parse_kernel_family("exponential"), KernelFamily::exponential);
}

TEST(Convolve, ConstantFieldGivesIntegral) {
  const Grid g(2, 16, 1.0);
  for (const auto& c : families(g)) {
    const Kernel k = build_kernel(c.family, c.params, g);
    const Field out = convolve(k, Field(g, 0.6));
    for (double v : out.values()) EXPECT_NEAR(v, 0.6 * k.j_integral(), 1e-12);
  }
}

TEST(Convolve, SingleModeIsScaledByMultiplier) {
  const Grid g(1, 32, 1.0);
  const Kernel k = build_kernel(KernelFamily::gaussian, {1.0, 0.1, 0.0}, g);
  const Field f = Field::from_function(g, [](const auto& x) { return std::cos(6 * kPi * x[0]); });
  const Field out = convolve(k, f);
  const double scale = k.spectral_multiplier()[3] * g.cell_volume();
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(out[i], scale * f[i], 1e-13);
}

TEST(Convolve, MatchesBruteForceIn1D) {
  const Grid g(1, 8, 1.0);
  for (const auto& c : families(Grid(1, 8, 1.0))) {
    const Kernel k = build_kernel(c.family, c.params, g);
    const Field f = random_field(g, 21);
    const Field fast = convolve(k, f);
    const Field slow = brute_force_convolution(c.family, c.params, f);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(fast[i], slow[i], 1e-12) << to_string(c.family);
  }
}

TEST(Convolve, MatchesBruteForceIn3D) {
  const Grid g(3, 4, 1.0);
  const std::vector<Case> cases = {{KernelFamily::gaussian, {1.0, 1.0 / 6, 0.0}},
                                   {KernelFamily::exponential, {1.0, 0.1, 0.0}},
                                   {KernelFamily::mollified_newtonian, {1.0, 0.0, 0.5}}};
  for (const auto& c : cases) {
    const Kernel k = build_kernel(c.family, c.params, g);
    const Field f = random_field(g, 22);
    const Field fast = convolve(k, f);
    const Field slow = brute_force_convolution(c.family, c.params, f);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(fast[i], slow[i], 1e-12) << to_string(c.family);
  }
}

TEST(Convolve, PreservesMean) {
  const Grid g(2, 32, 1.0);
  for (const auto& c : families(g)) {
    const Kernel k = build_kernel(c.family, c.params, g);
    const Field f = random_field(g, 4, -0.2, 1.0);
    EXPECT_LE(rel_diff(mean(convolve(k, f)), k.j_integral() * mean(f)), 1e-12);
  }
}

TEST(Convolve, IsLinear) {
  const Grid g(1, 64, 1.0);
  const Kernel k = build_kernel(KernelFamily::exponential, {1.0, 0.05, 0.0}, g);
  const Field f = random_field(g, 1);
  const Field h = random_field(g, 2);
  const Field lhs = convolve(k, 2.5 * f + (-0.75) * h);
  const Field rhs = 2.5 * convolve(k, f) + (-0.75) * convolve(k, h);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(lhs[i], rhs[i], 1e-12);
}

TEST(Convolve, GradientObeysYoungBound) {
  for (int dim = 1; dim <= 3; ++dim) {
    const Grid g(dim, dim == 3 ? 16 : 64, 1.0);
    for (const auto& c : families(g)) {
      const Kernel k = build_kernel(c.family, c.params, g);
      for (int seed = 0; seed < 20; ++seed) {
        const Field f = random_field(g, 500 + seed);
        const auto grad = convolve_gradient(k, f);
        double sup = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
          double norm_sq = 0.0;
          for (const Field& comp : grad) norm_sq += comp[i] * comp[i];
          sup = std::max(sup, std::sqrt(norm_sq));
        }
        EXPECT_LE(sup, k.grad_j_l1() * lp_norm(f, kInfNorm) * (1 + 1e-6)) << to_string(c.family) << " dim " << dim;
      }
    }
  }
}

TEST(Convolve, RejectsGridMismatch) {
  const Kernel k = build_kernel(KernelFamily::gaussian, {1.0, 0.1, 0.0}, Grid(1, 16, 1.0));
  EXPECT_THROW(convolve(k, Field(Grid(1, 32, 1.0))), InvalidArgument);
}

}  // namespace
}  // namespace nlch
