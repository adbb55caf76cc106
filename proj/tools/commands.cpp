#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "nlch/degiorgi.hpp"
#include "nlch/diagnostics.hpp"
#include "nlch/dynamics.hpp"
#include "nlch/equilibrium.hpp"
#include "nlch/error.hpp"
#include "nlch/io/config.hpp"
#include "nlch/io/csv.hpp"
#include "nlch/io/snapshot.hpp"
#include "nlch/potential.hpp"

namespace nlch::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void kv(std::ostream& out, const std::string& key, double v) { out << key << " = " << num(v) << '\n'; }
void kv(std::ostream& out, const std::string& key, long long v) { out << key << " = " << v << '\n'; }
void kv(std::ostream& out, const std::string& key, bool v) { out << key << " = " << (v ? "true" : "false") << '\n'; }
void kv(std::ostream& out, const std::string& key, const std::string& v) { out << key << " = " << v << '\n'; }

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += (c == '\n' || c == '\r') ? ' ' : c;
  }
  return out;
}

int fail(std::ostream& err, ExitCode code, std::string_view message) {
  static constexpr const char* kinds[] = {"ok", "usage", "numerical", "io"};
  err << "error: kind=" << kinds[code] << " message=\"" << escape(message) << "\"\n";
  return code;
}

InitialData initial_data(const io::RunConfig& cfg, const Grid& grid) {
  const io::InitialConfig& in = cfg.initial;
  switch (in.mode) {
    case io::InitialMode::constant: return NoisyConstant{in.m, in.noise_amplitude, in.seed};
    case io::InitialMode::tanh: return TanhProfile{in.amplitude, in.radius, in.width};
    case io::InitialMode::snapshot: return FieldData{io::read_snapshot(in.snapshot, grid).phi};
  }
  throw InvalidArgument("unknown initial mode");
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

int cmd_simulate(const std::string& config_path, std::ostream& out) {
  const io::RunConfig cfg = io::load_config(config_path);
  const Grid grid = io::make_grid(cfg);
  const Kernel kernel = io::make_kernel(cfg);
  SimState state = init_state(grid, kernel, cfg.potential, initial_data(cfg, grid), cfg.initial.delta0);

  ensure_directory(cfg.output.directory);
  const std::string csv_path = (fs::path(cfg.output.directory) / "timeseries.csv").string();
  io::CsvWriter csv(csv_path);
  std::int64_t snapshot_index = 0;
  double min_sep = std::numeric_limits<double>::infinity();
  double max_drift = 0.0;

  RunOptions options;
  options.row_stride = cfg.output.csv_stride;
  options.snapshot_stride = cfg.output.snapshot_stride;
  const double m0 = mean(state.phi);
  options.on_row = [&](const DiagnosticsRow& row) {
    csv.write(row);
    min_sep = std::min(min_sep, row.delta_sep);
    max_drift = std::max(max_drift, std::abs(row.mass - m0));
  };
  options.on_snapshot = [&](const SimState& s) {
    const fs::path path = fs::path(cfg.output.directory) / io::snapshot_file_name(snapshot_index++);
    io::write_snapshot(s.phi, s.t, path.string());
  };
  const auto violations_before = potential::domain_violations();
  const RunResult result = run(std::move(state), cfg.t_end, cfg.stepper, kernel, cfg.potential, options);

  kv(out, "t_final", result.state.t);
  kv(out, "steps", static_cast<long long>(result.state.step_count));
  kv(out, "rows", static_cast<long long>(result.series.rows.size()));
  kv(out, "snapshots", static_cast<long long>(snapshot_index));
  kv(out, "initial_energy", result.series.initial_energy);
  if (!result.series.rows.empty()) {
    kv(out, "final_energy", result.series.rows.back().energy);
    kv(out, "energy_residual", result.series.rows.back().energy_residual);
  }
  kv(out, "min_delta_sep", min_sep);
  kv(out, "max_mass_drift", max_drift);
  kv(out, "domain_violations", static_cast<long long>(potential::domain_violations() - violations_before));
  kv(out, "csv", csv_path);
  return kOk;
}

int cmd_equilibrium(const std::string& config_path, const std::string& guess_path, std::ostream& out) {
  const io::RunConfig cfg = io::load_config(config_path);
  const Grid grid = io::make_grid(cfg);
  const Kernel kernel = io::make_kernel(cfg);
  const Field guess = guess_path.empty()
                          ? init_state(grid, kernel, cfg.potential, initial_data(cfg, grid), cfg.initial.delta0).phi
                          : io::read_snapshot(guess_path, grid).phi;
  const double m = mean(guess);
  const EquilibriumResult r = solve_stationary(kernel, cfg.potential, m, guess, cfg.equilibrium);

  ensure_directory(cfg.output.directory);
  const std::string path = (fs::path(cfg.output.directory) / "equilibrium.nlch").string();
  io::write_snapshot(r.phi_inf, 0.0, path);
  kv(out, "converged", r.converged);
  kv(out, "iterations", static_cast<long long>(r.iterations));
  kv(out, "m", m);
  kv(out, "mu_inf", r.mu_inf);
  kv(out, "residual_linf", r.residual_linf);
  kv(out, "mass_error", r.mass_error);
  kv(out, "separation_margin", r.separation_margin);
  kv(out, "energy", energy(r.phi_inf, kernel, cfg.potential));
  kv(out, "snapshot", path);
  if (!r.converged) throw NumericalError("equilibrium: no convergence after " + std::to_string(r.iterations) +
                                         " iterations (last update " + num(r.last_update) + ")");
  return kOk;
}

void print_phase(std::ostream& out, const std::string& prefix, const PhaseCheck& pc) {
  kv(out, prefix + ".superlevel_measure", pc.superlevel_measure);
  kv(out, prefix + ".threshold_exceeded", pc.threshold_exceeded);
  kv(out, prefix + ".bound_holds", pc.bound_holds);
  kv(out, prefix + ".nonincreasing", pc.nonincreasing);
  out << prefix << ".table = n,k_n,y_n,bound\n";
  for (std::size_t n = 0; n < pc.measured.y.size(); ++n) {
    out << n << ',' << num(pc.measured.levels[n]) << ',' << num(pc.measured.y[n]) << ',' << num(pc.bound[n])
        << '\n';
  }
}

int cmd_degiorgi(const std::string& config_path, const std::string& dir, std::ostream& out) {
  const io::RunConfig cfg = io::load_config(config_path);
  const Grid grid = io::make_grid(cfg);
  const Kernel kernel = io::make_kernel(cfg);
  std::vector<TimedField> snaps;
  for (const auto& path : io::list_snapshots(dir)) {
    io::Snapshot s = io::read_snapshot(path, grid);
    snaps.push_back({s.t, std::move(s.phi)});
  }
  if (snaps.size() < 2) throw InvalidArgument("degiorgi: need at least two snapshots in '" + dir + "'");
  std::sort(snaps.begin(), snaps.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  const double window = cfg.degiorgi.window > 0.0 ? cfg.degiorgi.window : snaps.back().t - snaps.front().t;

  std::vector<Field> fields;
  double margin = 1.0;
  for (const auto& s : snaps) {
    fields.push_back(s.phi);
    margin = std::min(margin, separation_margin(s.phi));
  }
  const double m = mean(snaps.front().phi);
  const double delta_hat = (1.0 - std::abs(m)) / 4.0;
  DeGiorgiParams params;
  params.delta = cfg.degiorgi.delta;
  params.alpha_bar = cfg.potential.alpha_bar;
  params.grad_j_l1 = kernel.grad_j_l1();
  params.c_tau = estimate_c_tau(snaps, cfg.potential);
  params.c_hat = estimate_c_hat(fields);
  const double rho_lo = 1.0 - 2.0 * delta_hat;
  const double rho_hi = 1.0 - margin;
  PoincareEstimate cp;
  if (rho_lo < rho_hi) cp = estimate_c_p(fields, rho_lo, rho_hi, 10);
  params.c_p = cp.evaluated > 0 ? cp.c_p : 1.0;

  const SchemeReport rep = verify_scheme_on_trajectory(snaps, params, window, cfg.degiorgi.n_max);
  kv(out, "snapshots", static_cast<long long>(snaps.size()));
  kv(out, "window", window);
  kv(out, "delta", params.delta);
  kv(out, "observed_margin", margin);
  kv(out, "grad_j_l1", params.grad_j_l1);
  kv(out, "c_tau_est", params.c_tau);
  kv(out, "c_hat_est", params.c_hat);
  kv(out, "c_p_est", params.c_p);
  kv(out, "c_p_source", std::string(cp.evaluated > 0 ? "trajectory" : "default"));
  kv(out, "tau_tilde", rep.tau_tilde);
  kv(out, "c_rec", rep.recursion.c_rec);
  kv(out, "threshold", rep.recursion.threshold);
  kv(out, "n_cap", static_cast<long long>(rep.upper.measured.n_cap));
  kv(out, "separated", rep.separated);
  print_phase(out, "upper", rep.upper);
  print_phase(out, "lower", rep.lower);
  return kOk;
}

int cmd_constants(const std::string& config_path, double delta, double c_p, double c_tau, double c_hat,
                  std::ostream& out) {
  const io::RunConfig cfg = io::load_config(config_path);
  const Kernel kernel = io::make_kernel(cfg);
  DeGiorgiParams params{delta, cfg.potential.alpha_bar, kernel.grad_j_l1(), c_hat, c_p, c_tau};
  const RecursionCoefficient rc = recursion_coefficient(params);
  const LemmaReport lemma = lemma_conv_bound(rc.c_rec, rc.b, rc.eps, 0.0, 0);
  kv(out, "grad_j_l1", params.grad_j_l1);
  kv(out, "tau_tilde", tau_tilde(params));
  kv(out, "c_rec", rc.c_rec);
  kv(out, "b", rc.b);
  kv(out, "eps", rc.eps);
  kv(out, "theta", lemma.theta);
  kv(out, "threshold", rc.threshold);
  return kOk;
}

int cmd_lemma(double C, double b, double eps, double y0, int n, std::ostream& out) {
  const LemmaReport r = lemma_conv_bound(C, b, eps, y0, n);
  kv(out, "theta", r.theta);
  kv(out, "threshold_exceeded", r.threshold_exceeded);
  kv(out, "violations", static_cast<long long>(r.violations));
  out << "n,y_n,bound\n";
  for (const auto& row : r.rows) out << row.n << ',' << num(row.y) << ',' << num(row.bound) << '\n';
  return kOk;
}

int cmd_potential_check(const std::string& config_path, const std::vector<double>& deltas, std::ostream& out) {
  const io::RunConfig cfg = io::load_config(config_path);
  const H4Report r = check_h4_asymptotics(cfg.potential, deltas);
  kv(out, "second_limit", r.second_limit);
  kv(out, "first_limit", r.first_limit);
  kv(out, "second_converged", r.second_converged);
  kv(out, "first_converged", r.first_converged);
  kv(out, "mirror_max_difference", r.mirror_max_difference);
  out << "delta,delta_F2,F1_over_log,delta_F2_mirror,F1_over_log_mirror\n";
  for (const auto& row : r.rows) {
    out << num(row.delta) << ',' << num(row.scaled_second) << ',' << num(row.scaled_first) << ','
        << num(row.scaled_second_mirror) << ',' << num(row.scaled_first_mirror) << '\n';
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nonlocal Cahn-Hilliard simulator and verification tools", "nlch"};
  app.require_subcommand(1);

  std::string config;
  std::string guess;
  std::string snapshots;
  double delta = 0.0, c_p = 0.0, c_tau = 0.0, c_hat = 0.0;
  double C = 0.0, b = 0.0, eps = 0.0, y0 = 0.0;
  int n = 0;
  std::vector<double> deltas{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};

  auto* simulate = app.add_subcommand("simulate", "Run the dynamics; write CSV and snapshots");
  simulate->add_option("config", config, "Run configuration")->required();

  auto* equilibrium = app.add_subcommand("equilibrium", "Solve for a stationary state");
  equilibrium->add_option("config", config, "Run configuration")->required();
  equilibrium->add_option("--guess", guess, "Snapshot used as initial guess");

  auto* degiorgi = app.add_subcommand("degiorgi", "Level-set measurements on stored snapshots");
  degiorgi->add_option("config", config, "Run configuration")->required();
  degiorgi->add_option("--snapshots", snapshots, "Directory with snap_*.nlch files")->required();

  auto* constants = app.add_subcommand("constants", "Evaluate tau~, C_rec, b, eps, theta and threshold");
  constants->add_option("config", config, "Run configuration")->required();
  constants->add_option("--delta", delta)->required();
  constants->add_option("--c-p", c_p)->required();
  constants->add_option("--c-tau", c_tau)->required();
  constants->add_option("--c-hat", c_hat)->required();

  auto* lemma = app.add_subcommand("lemma", "Tabulate the geometric convergence bound");
  lemma->add_option("--C", C)->required();
  lemma->add_option("--b", b)->required();
  lemma->add_option("--eps", eps)->required();
  lemma->add_option("--y0", y0)->required();
  lemma->add_option("--n", n)->required();

  auto* potential_check = app.add_subcommand("potential-check", "Endpoint asymptotics of the potential");
  potential_check->add_option("config", config, "Run configuration")->required();
  potential_check->add_option("--deltas", deltas, "Values of delta in (0, 0.1]")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    return fail(err, kUsage, e.what());
  }

  try {
    if (*simulate) return cmd_simulate(config, out);
    if (*equilibrium) return cmd_equilibrium(config, guess, out);
    if (*degiorgi) return cmd_degiorgi(config, snapshots, out);
    if (*constants) return cmd_constants(config, delta, c_p, c_tau, c_hat, out);
    if (*lemma) return cmd_lemma(C, b, eps, y0, n, out);
    if (*potential_check) return cmd_potential_check(config, deltas, out);
  } catch (const ConfigError& e) {
    return fail(err, kUsage, e.what());
  } catch (const InvalidArgument& e) {
    return fail(err, kUsage, e.what());
  } catch (const IoError& e) {
    return fail(err, kIo, e.what());
  } catch (const NumericalError& e) {
    return fail(err, kNumerical, e.what());
  } catch (const DomainError& e) {
    return fail(err, kNumerical, e.what());
  } catch (const fs::filesystem_error& e) {
    return fail(err, kIo, e.what());
  }
  return fail(err, kUsage, "no subcommand");
}

}  // namespace nlch::cli
