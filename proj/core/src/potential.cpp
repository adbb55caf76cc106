#include "nlch/potential.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nlch/error.hpp"

namespace nlch {

void validate(const PotentialParams& p) {
  if (!(std::isfinite(p.alpha_bar) && p.alpha_bar > 0.0)) {
    throw InvalidArgument("potential: alpha_bar must be positive");
  }
  if (!(std::isfinite(p.alpha0) && p.alpha0 > p.alpha_bar)) {
    throw InvalidArgument("potential: alpha0 must exceed alpha_bar");
  }
}

namespace potential {

namespace {

std::atomic<std::uint64_t> g_violations{0};

[[noreturn]] void reject(const char* what, double s) {
  g_violations.fetch_add(1, std::memory_order_relaxed);
  throw DomainError(std::string(what) + ": argument " + std::to_string(s) +
                    " outside the admissible interval");
}

void require_interior(const char* what, double s) {
  if (!(std::abs(s) <= 1.0 - kDomainGuard)) reject(what, s);
}

}  // namespace

double value(const PotentialParams& p, double s) {
  if (!(std::abs(s) <= 1.0)) reject("F", s);
  if (std::abs(s) == 1.0) return p.alpha_bar * std::numbers::ln2;
  // (1+s)ln(1+s) + (1-s)ln(1-s) = 2 s atanh(s) + ln(1 - s²)
  const double log_term = std::abs(s) < 0.5 ? std::log1p(-s * s) : std::log((1.0 - s) * (1.0 + s));
  return p.alpha_bar * (s * std::atanh(s) + 0.5 * log_term);
}

double derivative(const PotentialParams& p, double s) {
  require_interior("F'", s);
  return p.alpha_bar * std::atanh(s);
}

double second_derivative(const PotentialParams& p, double s) {
  require_interior("F''", s);
  return p.alpha_bar / ((1.0 - s) * (1.0 + s));
}

double derivative_inverse(const PotentialParams& p, double w) {
  constexpr double kBelowOne = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  return std::clamp(std::tanh(w / p.alpha_bar), -kBelowOne, kBelowOne);
}

double psi(const PotentialParams& p, double s) { return value(p, s) - 0.5 * p.alpha0 * s * s; }

double derivative_at_gap(const PotentialParams& p, double delta) {
  return 0.5 * p.alpha_bar * (std::log1p(-delta) - std::log(delta));
}

double second_derivative_at_gap(const PotentialParams& p, double delta) {
  return p.alpha_bar / (4.0 * delta * (1.0 - delta));
}

std::uint64_t domain_violations() noexcept { return g_violations.load(std::memory_order_relaxed); }

}  // namespace potential

H4Report check_h4_asymptotics(const PotentialParams& p, std::span<const double> deltas) {
  validate(p);
  H4Report report;
  report.second_limit = p.alpha_bar / 4.0;
  report.first_limit = p.alpha_bar / 2.0;
  if (deltas.empty()) return report;

  double smallest = std::numeric_limits<double>::infinity();
  std::size_t smallest_index = 0;
  for (double delta : deltas) {
    if (!(delta > 0.0 && delta <= 0.1)) {
      throw InvalidArgument("check_h4_asymptotics: deltas must lie in (0, 0.1]");
    }
    const double upper = 1.0 - 2.0 * delta;
    const double lower = -1.0 + 2.0 * delta;
    const double log_delta = std::abs(std::log(delta));
    H4Row row{delta,
              delta * potential::second_derivative(p, upper),
              potential::derivative(p, upper) / log_delta,
              delta * potential::second_derivative(p, lower),
              std::abs(potential::derivative(p, lower)) / log_delta};
    report.mirror_max_difference =
        std::max({report.mirror_max_difference, std::abs(row.scaled_second - row.scaled_second_mirror),
                  std::abs(row.scaled_first - row.scaled_first_mirror)});
    if (delta < smallest) {
      smallest = delta;
      smallest_index = report.rows.size();
    }
    report.rows.push_back(row);
  }
  const H4Row& tail = report.rows[smallest_index];
  report.second_converged =
      std::abs(tail.scaled_second - report.second_limit) <= 0.01 * report.second_limit;
  report.first_converged =
      std::abs(tail.scaled_first - report.first_limit) <= 0.01 * report.first_limit;
  return report;
}

}  // namespace nlch
