#include "abp/run_config.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string_view>

#include "abp/errors.hpp"
#include "abp/initial_data.hpp"

namespace abp {
namespace {

std::string trim(std::string_view s) {
  const char* ws = " \t\r";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& v) {
  throw ConfigError("run config: bad value for " + key + ": '" + v + "'");
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || p != end) bad_value(key, v);
  return out;
}

long to_long(const std::string& key, const std::string& v) {
  long out = 0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || p != end) bad_value(key, v);
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  const long out = to_long(key, v);
  if (out < -(1L << 30) || out > (1L << 30)) bad_value(key, v);
  return int(out);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  bad_value(key, v);
}

void put(std::ostream& out, const char* key, double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  out << key << " = " << std::string_view(buf, std::size_t(p - buf)) << '\n';
}

void put(std::ostream& out, const char* key, const std::string& v) {
  out << key << " = " << v << '\n';
}

void put(std::ostream& out, const char* key, bool v) {
  out << key << " = " << (v ? "true" : "false") << '\n';
}

template <class Int>
void put(std::ostream& out, const char* key, Int v) {
  out << key << " = " << v << '\n';
}

bool contains(const std::vector<std::string>& names, const std::string& s) {
  for (const std::string& n : names)
    if (n == s) return true;
  return false;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "model.kind") model = value;
  else if (key == "model.Pe") Pe = to_double(key, value);
  else if (key == "model.De") De = to_double(key, value);
  else if (key == "model.n") n = to_int(key, value);
  else if (key == "grid.nx") nx = to_int(key, value);
  else if (key == "grid.ny") ny = to_int(key, value);
  else if (key == "time.T") T = to_double(key, value);
  else if (key == "time.dt") dt = to_double(key, value);
  else if (key == "time.scheme") scheme = value;
  else if (key == "time.cfl_safety") cfl_safety = to_double(key, value);
  else if (key == "time.enforce_stability") enforce_stability = to_bool(key, value);
  else if (key == "init.preset") preset = value;
  else if (key == "init.file") init_file = value;
  else if (key == "init.mass") mass = to_double(key, value);
  else if (key == "init.theta_star") theta_star = to_double(key, value);
  else if (key == "init.mollify") mollify = to_bool(key, value);
  else if (key == "init.mollify_epsilon") mollify_epsilon = to_double(key, value);
  else if (key == "init.mollify_alpha") mollify_alpha = to_double(key, value);
  else if (key == "output.dir") output_dir = value;
  else if (key == "output.diag_cadence") diag_cadence = to_double(key, value);
  else if (key == "output.snapshot_cadence") snapshot_cadence = to_double(key, value);
  else if (key == "run.seed") seed = to_long(key, value);
  else if (key == "run.invariant_policy") invariant_policy = value;
  else if (key == "run.threads") threads = to_int(key, value);
  else throw ConfigError("run config: unknown key '" + key + "'");
}

void RunConfig::validate() const {
  if (model != "abp2d" && model != "gt1d")
    throw ConfigError("run config: model.kind must be abp2d or gt1d, got '" + model + "'");
  if (scheme != "etd-rk2" && scheme != "etd-euler")
    throw ConfigError("run config: time.scheme must be etd-rk2 or etd-euler, got '" +
                      scheme + "'");
  if (invariant_policy != "fail" && invariant_policy != "warn")
    throw ConfigError("run config: run.invariant_policy must be fail or warn, got '" +
                      invariant_policy + "'");
  if (!(T >= 0.0) || !std::isfinite(T))
    throw ConfigError("run config: time.T must be finite and >= 0");
  if (!(snapshot_cadence >= 0.0) || !std::isfinite(snapshot_cadence))
    throw ConfigError("run config: output.snapshot_cadence must be finite and >= 0");
  if (threads < 0) throw ConfigError("run config: run.threads must be >= 0");
  if (!(mass >= 0.0 && mass < 1.0))
    throw ConfigError("run config: init.mass must lie in [0,1)");

  spatial_grid();  // grid admissibility (nx/ny even, minimum size)
  if (model == "abp2d") {
    abp_params().validate();
  } else if (!(Pe >= 0.0)) {
    throw ConfigError("run config: model.Pe must be nonnegative");
  }
  integrator_config().validate();

  if (init_file.empty()) {
    if (model == "abp2d" && !contains(preset_names(), preset))
      throw ConfigError("run config: unknown init.preset '" + preset + "'");
    if (model == "gt1d" && !contains(gt_preset_names(), preset))
      throw ConfigError("run config: unknown init.preset '" + preset + "'");
  }
  if (mollify) {
    if (model != "abp2d")
      throw ConfigError("run config: init.mollify applies to the abp2d model only");
    MollifierSpec{mollify_epsilon, mollify_alpha}.validate();
  }
}

SpatialGrid RunConfig::spatial_grid() const {
  return SpatialGrid(nx, model == "gt1d" ? 0 : ny);
}

AbpParams RunConfig::abp_params() const {
  if (model != "abp2d")
    throw ConfigError("run config: not an abp2d run");
  AbpParams par;
  par.Pe = Pe;
  par.De = De;
  par.n = n;
  par.grid = spatial_grid();
  par.phi_mass = mass;
  return par;
}

IntegratorConfig RunConfig::integrator_config() const {
  IntegratorConfig cfg;
  cfg.dt = dt;
  cfg.scheme = scheme == "etd-euler" ? Scheme::EtdEuler : Scheme::EtdRk2;
  cfg.cfl_safety = cfl_safety;
  cfg.enforce_stability = enforce_stability;
  cfg.observe_cadence = diag_cadence;
  return cfg;
}

RunConfig parse_run_config(std::istream& in) {
  RunConfig c;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("run config: line " + std::to_string(lineno) +
                        ": expected key=value, got '" + stripped + "'");
    c.set(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
  return c;
}

void format_run_config(std::ostream& out, const RunConfig& c) {
  put(out, "model.kind", c.model);
  put(out, "model.Pe", c.Pe);
  put(out, "model.De", c.De);
  put(out, "model.n", c.n);
  put(out, "grid.nx", c.nx);
  put(out, "grid.ny", c.ny);
  put(out, "time.T", c.T);
  put(out, "time.dt", c.dt);
  put(out, "time.scheme", c.scheme);
  put(out, "time.cfl_safety", c.cfl_safety);
  put(out, "time.enforce_stability", c.enforce_stability);
  put(out, "init.preset", c.preset);
  put(out, "init.file", c.init_file);
  put(out, "init.mass", c.mass);
  put(out, "init.theta_star", c.theta_star);
  put(out, "init.mollify", c.mollify);
  put(out, "init.mollify_epsilon", c.mollify_epsilon);
  put(out, "init.mollify_alpha", c.mollify_alpha);
  put(out, "output.dir", c.output_dir);
  put(out, "output.diag_cadence", c.diag_cadence);
  put(out, "output.snapshot_cadence", c.snapshot_cadence);
  put(out, "run.seed", c.seed);
  put(out, "run.invariant_policy", c.invariant_policy);
  put(out, "run.threads", c.threads);
}

}  // namespace abp
