#include "nlch/io/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "nlch/error.hpp"

namespace nlch::io {

std::string_view to_string(InitialMode mode) noexcept {
  switch (mode) {
    case InitialMode::constant: return "constant";
    case InitialMode::tanh: return "tanh";
    case InitialMode::snapshot: return "snapshot";
  }
  return "unknown";
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(std::string(key) + ": invalid number '" + std::string(value) + "'");
  }
  return out;
}

std::string format(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename T>
std::string format_int(T v) {
  return std::to_string(v);
}

struct Key {
  std::function<void(RunConfig&, std::string_view key, std::string_view value)> set;
  std::function<std::string(const RunConfig&)> get;
};

Key real(std::function<double&(RunConfig&)> ref) {
  return {[ref](RunConfig& c, std::string_view k, std::string_view v) { ref(c) = parse_number<double>(k, v); },
          [ref](const RunConfig& c) { return format(ref(const_cast<RunConfig&>(c))); }};
}

Key integer(std::function<int&(RunConfig&)> ref) {
  return {[ref](RunConfig& c, std::string_view k, std::string_view v) { ref(c) = parse_number<int>(k, v); },
          [ref](const RunConfig& c) { return format_int(ref(const_cast<RunConfig&>(c))); }};
}

Key text(std::function<std::string&(RunConfig&)> ref) {
  return {[ref](RunConfig& c, std::string_view, std::string_view v) { ref(c) = std::string(v); },
          [ref](const RunConfig& c) { return ref(const_cast<RunConfig&>(c)); }};
}

const std::map<std::string, Key, std::less<>>& keys() {
  static const std::map<std::string, Key, std::less<>> table = {
      {"grid.dim", integer([](RunConfig& c) -> int& { return c.grid.dim; })},
      {"grid.n", integer([](RunConfig& c) -> int& { return c.grid.n; })},
      {"grid.length", real([](RunConfig& c) -> double& { return c.grid.length; })},
      {"kernel.family",
       {[](RunConfig& c, std::string_view k, std::string_view v) {
          try {
            c.kernel.family = parse_kernel_family(v);
          } catch (const InvalidArgument& e) {
            throw ConfigError(std::string(k) + ": " + e.what());
          }
        },
        [](const RunConfig& c) { return std::string(to_string(c.kernel.family)); }}},
      {"kernel.amplitude", real([](RunConfig& c) -> double& { return c.kernel.params.amplitude; })},
      {"kernel.width", real([](RunConfig& c) -> double& { return c.kernel.params.width; })},
      {"kernel.mollification_radius",
       real([](RunConfig& c) -> double& { return c.kernel.params.mollification_radius; })},
      {"potential.alpha_bar", real([](RunConfig& c) -> double& { return c.potential.alpha_bar; })},
      {"potential.alpha0", real([](RunConfig& c) -> double& { return c.potential.alpha0; })},
      {"initial.mode",
       {[](RunConfig& c, std::string_view k, std::string_view v) {
          if (v == "constant") {
            c.initial.mode = InitialMode::constant;
          } else if (v == "tanh") {
            c.initial.mode = InitialMode::tanh;
          } else if (v == "snapshot") {
            c.initial.mode = InitialMode::snapshot;
          } else {
            throw ConfigError(std::string(k) + ": expected constant, tanh or snapshot, got '" +
                              std::string(v) + "'");
          }
        },
        [](const RunConfig& c) { return std::string(to_string(c.initial.mode)); }}},
      {"initial.m", real([](RunConfig& c) -> double& { return c.initial.m; })},
      {"initial.noise_amplitude", real([](RunConfig& c) -> double& { return c.initial.noise_amplitude; })},
      {"initial.seed",
       {[](RunConfig& c, std::string_view k, std::string_view v) {
          c.initial.seed = parse_number<std::uint64_t>(k, v);
        },
        [](const RunConfig& c) { return format_int(c.initial.seed); }}},
      {"initial.delta0", real([](RunConfig& c) -> double& { return c.initial.delta0; })},
      {"initial.amplitude", real([](RunConfig& c) -> double& { return c.initial.amplitude; })},
      {"initial.width", real([](RunConfig& c) -> double& { return c.initial.width; })},
      {"initial.radius", real([](RunConfig& c) -> double& { return c.initial.radius; })},
      {"initial.snapshot", text([](RunConfig& c) -> std::string& { return c.initial.snapshot; })},
      {"stepper.dt", real([](RunConfig& c) -> double& { return c.stepper.dt; })},
      {"stepper.dt_min", real([](RunConfig& c) -> double& { return c.stepper.dt_min; })},
      {"stepper.inner_tol", real([](RunConfig& c) -> double& { return c.stepper.inner_tol; })},
      {"stepper.inner_max_iters", integer([](RunConfig& c) -> int& { return c.stepper.inner_max_iters; })},
      {"stepper.epsilon_safe", real([](RunConfig& c) -> double& { return c.stepper.safety_margin; })},
      {"output.directory", text([](RunConfig& c) -> std::string& { return c.output.directory; })},
      {"output.snapshot_stride", integer([](RunConfig& c) -> int& { return c.output.snapshot_stride; })},
      {"output.csv_stride", integer([](RunConfig& c) -> int& { return c.output.csv_stride; })},
      {"run.t_end", real([](RunConfig& c) -> double& { return c.t_end; })},
      {"degiorgi.delta", real([](RunConfig& c) -> double& { return c.degiorgi.delta; })},
      {"degiorgi.n_max", integer([](RunConfig& c) -> int& { return c.degiorgi.n_max; })},
      {"degiorgi.window", real([](RunConfig& c) -> double& { return c.degiorgi.window; })},
      {"equilibrium.tol", real([](RunConfig& c) -> double& { return c.equilibrium.tol; })},
      {"equilibrium.max_iters", integer([](RunConfig& c) -> int& { return c.equilibrium.max_iters; })},
      {"equilibrium.omega", real([](RunConfig& c) -> double& { return c.equilibrium.omega; })},
  };
  return table;
}

const std::vector<std::string>& required_keys() {
  static const std::vector<std::string> required = {
      "grid.dim", "grid.n", "grid.length", "kernel.family", "potential.alpha_bar", "potential.alpha0",
      "run.t_end"};
  return required;
}

// Runs `check` and rethrows module errors as ConfigError tagged with `key`.
template <typename F>
void checked(const char* key, F&& check) {
  try {
    check();
  } catch (const InvalidArgument& e) {
    const std::string what = e.what();
    // Module messages usually carry their own "<module>:" prefix already.
    if (what.starts_with(std::string(key) + ":")) throw ConfigError(what);
    throw ConfigError(std::string(key) + ": " + what);
  }
}

void require(bool ok, const char* key, const char* message) {
  if (!ok) throw ConfigError(std::string(key) + ": " + message);
}

}  // namespace

Grid make_grid(const RunConfig& config) {
  return Grid(config.grid.dim, config.grid.n, config.grid.length);
}

Kernel make_kernel(const RunConfig& config) {
  return build_kernel(config.kernel.family, config.kernel.params, make_grid(config));
}

void validate(const RunConfig& c) {
  checked("grid", [&] { make_grid(c); });
  const Grid grid = make_grid(c);
  checked("kernel", [&] { validate(c.kernel.family, c.kernel.params, grid); });
  checked("potential", [&] { validate(c.potential); });
  checked("stepper", [&] { validate(c.stepper); });

  const InitialConfig& in = c.initial;
  require(in.delta0 > 0.0 && in.delta0 < 1.0, "initial.delta0", "must lie in (0, 1)");
  switch (in.mode) {
    case InitialMode::constant:
      require(std::abs(in.m) < 1.0, "initial.m", "pure phase mean (|m| must be < 1)");
      require(in.noise_amplitude >= 0.0, "initial.noise_amplitude", "must be nonnegative");
      require(std::abs(in.m) + in.noise_amplitude <= 1.0 - in.delta0, "initial.noise_amplitude",
              "|m| + noise_amplitude exceeds 1 - delta0");
      break;
    case InitialMode::tanh:
      require(in.amplitude >= 0.0 && in.amplitude <= 1.0 - in.delta0, "initial.amplitude",
              "must lie in [0, 1 - delta0]");
      require(in.width > 0.0, "initial.width", "must be positive");
      require(in.radius > 0.0, "initial.radius", "must be positive");
      break;
    case InitialMode::snapshot:
      require(!in.snapshot.empty(), "initial.snapshot", "path required in snapshot mode");
      break;
  }
  require(std::isfinite(c.t_end) && c.t_end > 0.0, "run.t_end", "must be positive");
  require(c.output.snapshot_stride >= 0, "output.snapshot_stride", "must be nonnegative");
  require(c.output.csv_stride >= 1, "output.csv_stride", "must be >= 1");
  require(!c.output.directory.empty(), "output.directory", "must not be empty");
  require(c.degiorgi.delta > 0.0 && c.degiorgi.delta < 0.25, "degiorgi.delta", "must lie in (0, 1/4)");
  require(c.degiorgi.n_max >= 0, "degiorgi.n_max", "must be nonnegative");
  require(c.degiorgi.window >= 0.0, "degiorgi.window", "must be nonnegative");
  require(c.equilibrium.tol > 0.0, "equilibrium.tol", "must be positive");
  require(c.equilibrium.max_iters >= 1, "equilibrium.max_iters", "must be >= 1");
  require(c.equilibrium.omega > 0.0 && c.equilibrium.omega <= 1.0, "equilibrium.omega",
          "must lie in (0, 1]");
}

RunConfig parse_config(std::string_view input) {
  RunConfig config;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= input.size()) {
    const auto nl = input.find('\n', pos);
    std::string_view line = input.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? input.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no);
    if (eq == std::string_view::npos) {
      throw ConfigError(where + ": syntax error, expected 'section.key = value'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError(where + ": syntax error, empty key or value");
    }
    const auto it = keys().find(key);
    if (it == keys().end()) throw ConfigError(where + ": unknown key '" + std::string(key) + "'");
    if (!seen.insert(std::string(key)).second) {
      throw ConfigError(where + ": duplicate key '" + std::string(key) + "'");
    }
    it->second.set(config, key, value);
  }
  for (const auto& k : required_keys()) {
    if (!seen.contains(k)) throw ConfigError(k + ": required key missing");
  }
  validate(config);
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& config) {
  std::string out;
  std::string section;
  for (const auto& [name, key] : keys()) {
    const std::string this_section = name.substr(0, name.find('.'));
    if (!section.empty() && this_section != section) out += '\n';
    section = this_section;
    const std::string value = key.get(config);
    if (value.empty()) continue;  // unset text keys fall back to their defaults
    out += name + " = " + value + '\n';
  }
  return out;
}

}  // namespace nlch::io
