#include "nlch/degiorgi.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>

#include "nlch/error.hpp"

namespace nlch {

LemmaReport lemma_conv_bound(double C, double b, double eps, double y0, int n_max) {
  if (!(C > 0.0 && std::isfinite(C))) throw InvalidArgument("lemma: C must be positive");
  if (!(b > 1.0 && std::isfinite(b))) throw InvalidArgument("lemma: b must exceed 1");
  if (!(eps > 0.0 && std::isfinite(eps))) throw InvalidArgument("lemma: eps must be positive");
  if (!(y0 >= 0.0 && std::isfinite(y0))) throw InvalidArgument("lemma: y0 must be nonnegative");
  if (n_max < 0) throw InvalidArgument("lemma: n must be nonnegative");

  using ld = long double;
  const ld unit = LDBL_EPSILON;
  const ld ln_c = std::log(static_cast<ld>(C));
  const ld ln_b = std::log(static_cast<ld>(b));
  const ld e = eps;
  const ld ln_theta = -ln_c / e - ln_b / (e * e);

  LemmaReport report;
  report.theta = std::pow(C, -1.0 / eps) * std::pow(b, -1.0 / (eps * eps));
  report.threshold_exceeded = y0 > report.theta;
  report.rows.reserve(static_cast<std::size_t>(n_max) + 1);

  // Direct double iteration gives the reported values; the log-space
  // iteration with its error bound settles comparisons the direct values
  // cannot (underflow, ties at rounding level).
  double y = y0;
  ld ln_y = y0 > 0.0 ? std::log(static_cast<ld>(y0)) : -std::numeric_limits<ld>::infinity();
  ld err = 4 * unit * std::abs(ln_y == -std::numeric_limits<ld>::infinity() ? 0 : ln_y);
  for (int n = 0; n <= n_max; ++n) {
    const double bound = report.theta * std::pow(b, -n / eps);
    report.rows.push_back({n, y, bound});

    if (!report.threshold_exceeded && y0 > 0.0 && !(y <= bound && bound > 0.0)) {
      const ld ln_bound = ln_theta - n * ln_b / e;
      const ld bound_err = 8 * unit * (std::abs(ln_theta) + n * std::abs(ln_b) / e + 1);
      if (ln_y - ln_bound > err + bound_err) ++report.violations;
    }

    // y_{n+1} = C bⁿ y_n^{1+ε}
    if (y0 > 0.0) {
      const ld next = ln_c + n * ln_b + (1 + e) * ln_y;
      err = (1 + e) * err + 8 * unit * (std::abs(ln_c) + n * std::abs(ln_b) + (1 + e) * std::abs(ln_y) + 1);
      ln_y = next;
    }
    y = C * std::pow(b, n) * std::pow(y, 1.0 + eps);
  }
  return report;
}

LevelSequence level_sequence(double delta, int n_max) {
  if (!(delta > 0.0 && delta < 0.5)) throw InvalidArgument("level_sequence: delta must lie in (0, 1/2)");
  if (n_max < 0) throw InvalidArgument("level_sequence: n_max must be nonnegative");
  LevelSequence seq;
  const double top = 1.0 - delta;
  for (int n = 0; n <= n_max; ++n) {
    const double gap = std::ldexp(delta, -n);
    seq.gap.push_back(gap);
    seq.k.push_back(top - gap);
  }
  seq.strict_until = 0;
  while (seq.strict_until < n_max && seq.k[seq.strict_until + 1] > seq.k[seq.strict_until]) {
    ++seq.strict_until;
  }
  return seq;
}

namespace {

double count_at_least(const Field& phi, double level, double sign) {
  std::size_t count = 0;
  for (double v : phi.values()) count += (sign * v >= level) ? 1 : 0;
  return static_cast<double>(count) * phi.grid().cell_volume();
}

struct Window {
  std::vector<const TimedField*> frames;
  double t_end = 0.0;
  double dt = 0.0;
};

Window select_window(std::span<const TimedField> snapshots, double window) {
  if (!(window > 0.0)) throw InvalidArgument("degiorgi: window must be positive");
  if (snapshots.empty()) throw InvalidArgument("degiorgi: empty window (no snapshots)");
  for (std::size_t i = 1; i < snapshots.size(); ++i) {
    if (!(snapshots[i].t > snapshots[i - 1].t)) {
      throw InvalidArgument("degiorgi: snapshot times must be strictly increasing");
    }
  }
  Window w;
  w.t_end = snapshots.back().t;
  const double start = w.t_end - window * (1.0 + 1e-9);
  for (const auto& s : snapshots) {
    if (s.t >= start) w.frames.push_back(&s);
  }
  if (w.frames.size() < 2) {
    throw InvalidArgument("degiorgi: empty window (need at least two snapshots inside it)");
  }
  w.dt = w.frames[1]->t - w.frames[0]->t;
  for (std::size_t i = 1; i < w.frames.size(); ++i) {
    const double d = w.frames[i]->t - w.frames[i - 1]->t;
    if (std::abs(d - w.dt) > 1e-6 * w.dt) {
      throw InvalidArgument("degiorgi: non-uniform snapshot stride");
    }
  }
  return w;
}

YnMeasurement measure_signed(std::span<const TimedField> snapshots, double delta, int n_max,
                             double window, double sign) {
  if (n_max < 0) throw InvalidArgument("measure_yn: n_max must be nonnegative");
  const Window w = select_window(snapshots, window);
  YnMeasurement m;
  m.n_requested = n_max;
  m.tau_window = window / 3.0;
  m.dt_snapshot = w.dt;
  m.t_end = w.t_end;
  m.snapshots_used = w.frames.size();
  m.n_cap = m.tau_window >= w.dt ? static_cast<int>(std::floor(std::log2(m.tau_window / w.dt))) : 0;
  const int n_used = std::min(n_max, m.n_cap);
  const LevelSequence levels = level_sequence(delta, n_used);
  m.levels = levels.k;
  m.y.assign(static_cast<std::size_t>(n_used) + 1, 0.0);
  const double slack = 1e-9 * window;
  for (int n = 0; n <= n_used; ++n) {
    // t_{n-1} = T - τ̃ (1 + 2^{1-n})
    const double t_start = w.t_end - m.tau_window * (1.0 + std::ldexp(1.0, 1 - n));
    double sum = 0.0;
    for (const TimedField* f : w.frames) {
      if (f->t >= t_start - slack) sum += count_at_least(f->phi, levels.k[n], sign);
    }
    m.y[n] = sum * w.dt;
  }
  return m;
}

}  // namespace

YnMeasurement measure_yn(std::span<const TimedField> snapshots, double delta, int n_max,
                         double window) {
  return measure_signed(snapshots, delta, n_max, window, 1.0);
}

void validate(const DeGiorgiParams& params) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(params.delta) || !(params.delta < 0.25)) {
    throw InvalidArgument("degiorgi: delta must lie in (0, 1/4)");
  }
  if (!positive(params.alpha_bar) || !positive(params.grad_j_l1) || !positive(params.c_hat) ||
      !positive(params.c_p) || !positive(params.c_tau)) {
    throw InvalidArgument("degiorgi: alpha_bar, grad_j_l1, c_hat, c_p and c_tau must be positive");
  }
}

RecursionCoefficient recursion_coefficient(const DeGiorgiParams& params) {
  validate(params);
  const PotentialParams pot{params.alpha_bar, 2.0 * params.alpha_bar};
  const double d = params.delta;
  const double f2 = potential::second_derivative_at_gap(pot, d);
  const double g = params.grad_j_l1;
  const double poin = 1.0 + params.c_p * params.c_p;
  RecursionCoefficient rc;
  rc.b = std::pow(2.0, 4.5);
  rc.eps = 0.6;
  rc.c_rec = rc.b * g * g * g * std::pow(params.c_hat, 0.9) * std::pow(poin, 0.9) /
             (d * d * d * std::pow(f2, 2.4));
  rc.threshold = std::ldexp(1.0, -20) * std::pow(d, 5) * std::pow(f2, 4) /
                 (std::pow(g, 5) * std::pow(params.c_hat, 1.5) * std::pow(poin, 1.5));
  return rc;
}

double tau_tilde(const DeGiorgiParams& params) {
  const RecursionCoefficient rc = recursion_coefficient(params);
  const PotentialParams pot{params.alpha_bar, 2.0 * params.alpha_bar};
  const double f1 = potential::derivative_at_gap(pot, params.delta);
  return rc.threshold * f1 / (3.0 * params.c_tau);
}

double estimate_c_tau(std::span<const TimedField> snapshots, const PotentialParams& p) {
  double best = 0.0;
  for (const auto& s : snapshots) {
    double sum = 0.0;
    for (double v : s.phi.values()) sum += std::abs(potential::derivative(p, v));
    best = std::max(best, sum * s.phi.grid().cell_volume());
  }
  return best;
}

namespace {

PhaseCheck check_phase(std::span<const TimedField> snapshots, const DeGiorgiParams& params,
                       const RecursionCoefficient& rc, double window, int n_max, double sign) {
  PhaseCheck pc;
  pc.measured = measure_signed(snapshots, params.delta, n_max, window, sign);
  const auto& y = pc.measured.y;
  const int n_used = static_cast<int>(y.size()) - 1;
  const LemmaReport lemma = lemma_conv_bound(rc.c_rec, rc.b, rc.eps, y[0], n_used);
  pc.threshold_exceeded = y[0] > rc.threshold;
  pc.bound_holds = true;
  pc.nonincreasing = true;
  for (int n = 0; n <= n_used; ++n) {
    pc.bound.push_back(lemma.rows[n].bound);
    if (y[n] > lemma.rows[n].bound) pc.bound_holds = false;
    if (n > 0 && y[n] > y[n - 1]) pc.nonincreasing = false;
  }
  const Window w = select_window(snapshots, window);
  for (const TimedField* f : w.frames) {
    pc.superlevel_measure += count_at_least(f->phi, 1.0 - params.delta, sign) * w.dt;
  }
  return pc;
}

}  // namespace

SchemeReport verify_scheme_on_trajectory(std::span<const TimedField> snapshots,
                                         const DeGiorgiParams& params, double window, int n_max) {
  SchemeReport report;
  report.recursion = recursion_coefficient(params);
  report.tau_tilde = tau_tilde(params);
  report.upper = check_phase(snapshots, params, report.recursion, window, n_max, 1.0);
  report.lower = check_phase(snapshots, params, report.recursion, window, n_max, -1.0);
  report.separated = report.upper.superlevel_measure == 0.0 && report.lower.superlevel_measure == 0.0;
  return report;
}

}  // namespace nlch
