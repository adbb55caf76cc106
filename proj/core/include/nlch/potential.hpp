#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace nlch {

/// Parameters of the logarithmic (Flory–Huggins) potential
///   F(s) = (ᾱ/2) ((1+s) ln(1+s) + (1-s) ln(1-s)).
/// alpha0 only enters the reported double-well Ψ(s) = F(s) - α₀ s²/2.
struct PotentialParams {
  double alpha_bar = 1.0;
  double alpha0 = 2.0;

  bool operator==(const PotentialParams&) const = default;
};

/// Throws InvalidArgument unless 0 < alpha_bar < alpha0.
void validate(const PotentialParams& p);

namespace potential {

/// Closest approach to ±1 at which F' and F'' are still evaluated.
inline constexpr double kDomainGuard = 1e-15;

/// F(s) for |s| <= 1; F(±1) = ᾱ ln 2. Throws DomainError for |s| > 1.
double value(const PotentialParams& p, double s);

/// F'(s) = ᾱ atanh(s). Throws DomainError unless |s| <= 1 - kDomainGuard.
double derivative(const PotentialParams& p, double s);

/// F''(s) = ᾱ / ((1-s)(1+s)). Same domain as derivative().
double second_derivative(const PotentialParams& p, double s);

/// (F')^{-1}(w) = tanh(w / ᾱ), kept strictly inside (-1, 1).
double derivative_inverse(const PotentialParams& p, double w);

/// Ψ(s) = F(s) - α₀ s² / 2.
double psi(const PotentialParams& p, double s);

/// F'(1 - 2δ) = (ᾱ/2) ln((1-δ)/δ), evaluated in δ without forming 1 - 2δ.
double derivative_at_gap(const PotentialParams& p, double delta);

/// F''(1 - 2δ) = ᾱ / (4δ(1-δ)).
double second_derivative_at_gap(const PotentialParams& p, double delta);

/// Number of rejected out-of-domain evaluations in this process.
std::uint64_t domain_violations() noexcept;

}  // namespace potential

struct H4Row {
  double delta;
  double scaled_second;         // δ F''(1-2δ)
  double scaled_first;          // F'(1-2δ) / |ln δ|
  double scaled_second_mirror;  // δ F''(-1+2δ)
  double scaled_first_mirror;   // |F'(-1+2δ)| / |ln δ|
};

struct H4Report {
  std::vector<H4Row> rows;
  double second_limit = 0.0;  // ᾱ/4
  double first_limit = 0.0;   // ᾱ/2
  bool second_converged = false;
  bool first_converged = false;
  double mirror_max_difference = 0.0;
};

/// Evaluates the endpoint growth ratios for each δ ∈ (0, 0.1]; convergence
/// flags compare the smallest δ against the limits within 1%.
H4Report check_h4_asymptotics(const PotentialParams& p, std::span<const double> deltas);

}  // namespace nlch
