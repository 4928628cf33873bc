#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "abp/abp2d.hpp"
#include "abp/diagnostics.hpp"
#include "abp/errors.hpp"
#include "abp/field.hpp"
#include "abp/grid.hpp"
#include "abp/gt1d.hpp"
#include "abp/heat_kernel.hpp"
#include "abp/initial_data.hpp"
#include "abp/integrate.hpp"
#include "abp/run_config.hpp"
#include "abp/snapshot.hpp"
#include "abp/threads.hpp"
#include "abp/verify.hpp"

namespace {

using namespace abp;

// Exit codes: 0 clean, 1 numeric failure, 2 invariant violation under the
// fail policy, 64 configuration or usage errors.
constexpr int kExitNumeric = 1;
constexpr int kExitInvariant = 2;
constexpr int kExitConfig = 64;

RunConfig resolve_config(const std::string& path, const std::vector<std::string>& overrides) {
  RunConfig c;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("simulate: cannot read config file '" + path + "'");
    c = parse_run_config(in);
  }
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw ConfigError("simulate: override must be key=value, got '" + kv + "'");
    c.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  c.validate();
  return c;
}

// Numbered snapshot path: snap_000.abps, snap_001.abps, ...
std::filesystem::path snap_path(const std::filesystem::path& dir, int index) {
  char name[32];
  std::snprintf(name, sizeof name, "snap_%03d.abps", index);
  return dir / name;
}

template <class State>
void dump_snapshot(const std::filesystem::path& file, const State& s) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ConfigError("simulate: cannot write '" + file.string() + "'");
  write_snapshot(out, s);
}

// Shared tail of both models: diagnostics file, bounds policy, summary line.
int finish_run(const RunConfig& c, const std::filesystem::path& dir,
               const std::vector<DiagnosticsRecord>& series, long steps, long clamped) {
  {
    std::ofstream out(dir / "diagnostics.csv", std::ios::binary);
    if (!out) throw ConfigError("simulate: cannot write diagnostics.csv");
    write_diagnostics_csv(out, series);
  }
  std::printf("wrote %s (%zu records, %ld steps, %ld clamped)\n",
              (dir / "diagnostics.csv").string().c_str(), series.size(), steps, clamped);
  std::printf("final: t=%.6g mass=%.12g\n", series.back().time, series.back().mass);

  const BoundsOutcome box = check_bounds(series, 1e-6);
  if (!box.pass) {
    std::fprintf(stderr,
                 "invariant violation along the run: min f=%.3e, rho range [%.3e, %.3e]\n",
                 box.worst_min_f, box.worst_min_rho, box.worst_max_rho);
    if (c.invariant_policy == "fail") return kExitInvariant;
    std::fprintf(stderr, "continuing under invariant_policy=warn\n");
  }
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::vector<std::string>& overrides) {
  const RunConfig c = resolve_config(config_path, overrides);
  set_worker_count(c.threads);

  const std::filesystem::path dir(c.output_dir);
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "config.resolved");
    if (!out) throw ConfigError("simulate: cannot write to output dir '" + c.output_dir + "'");
    format_run_config(out, c);
  }

  // Snapshot lattice: the state is captured at the first diagnostic
  // observation at or past each multiple of snapshot_cadence. With a zero
  // cadence only the final state file is written.
  const double eps_t = 1e-12 * std::max(1.0, c.T);
  int snap_index = 0;
  auto want_snapshot = [&](double t) {
    if (c.snapshot_cadence <= 0.0) return false;
    return t >= double(snap_index) * c.snapshot_cadence - eps_t;
  };

  if (c.model == "gt1d") {
    if (!c.init_file.empty())
      throw ConfigError("simulate: init.file applies to the abp2d model only");
    GtState init = gt_preset(c.preset, c.spatial_grid(), c.mass);
    ObserverGt observe = [&](const GtState& s, const DiagnosticsRecord& r) {
      if (want_snapshot(r.time)) dump_snapshot(snap_path(dir, snap_index++), s);
    };
    IntegrateResultGt res = integrate(init, c.Pe, c.T, c.integrator_config(), observe);
    dump_snapshot(dir / "final.abps", res.state);
    return finish_run(c, dir, res.series, res.stats.steps, res.stats.clamped_steps);
  }

  InitialSpec spec;
  if (!c.init_file.empty()) {
    std::ifstream in(c.init_file);
    if (!in) throw ConfigError("simulate: cannot read init.file '" + c.init_file + "'");
    spec = load_initial_csv(in);
  } else {
    spec = preset(c.preset, c.spatial_grid(), c.mass, c.theta_star);
  }

  const std::vector<Violation> bad = validate(spec);
  if (!bad.empty()) {
    std::fprintf(stderr, "initial data violates admissibility at %zu node(s); first: %s[%ld] = %.6g\n",
                 bad.size(), bad.front().what.c_str(), bad.front().index, bad.front().value);
    if (c.invariant_policy == "fail") return kExitInvariant;
    std::fprintf(stderr, "continuing under invariant_policy=warn\n");
  }

  AngularState state = materialize(spec, c.n);
  if (c.mollify) state = mollify(state, MollifierSpec{c.mollify_epsilon, c.mollify_alpha});

  const AbpParams par = c.abp_params();
  Observer2D observe = [&](const AngularState& s, const DiagnosticsRecord& r) {
    if (want_snapshot(r.time)) dump_snapshot(snap_path(dir, snap_index++), s);
  };
  IntegrateResult2D res = integrate(state, par, c.T, c.integrator_config(), observe);
  dump_snapshot(dir / "final.abps", res.state);
  return finish_run(c, dir, res.series, res.stats.steps, res.stats.clamped_steps);
}

int cmd_kernel(double t, double x, double y, double theta, bool three_d, bool self_check) {
  if (!(t > 0.0)) throw ConfigError("kernel: t must be positive");
  KernelEval k;
  const double value = three_d ? k.phi3d(t, x, y, theta) : k.phi1d(t, x);
  std::printf("%.15g\n", value);
  if (!self_check) return 0;

  double mass = 0.0;
  if (three_d) {
    const int nq = 48;
    long double acc = 0.0L;
    for (int i = 0; i < nq; ++i)
      for (int j = 0; j < nq; ++j)
        for (int l = 0; l < nq; ++l)
          acc += k.phi3d(t, kTwoPi * i / nq, kTwoPi * j / nq, kTwoPi * l / nq);
    mass = double(acc * (long double)(kTwoPi / nq) * (kTwoPi / nq) * (kTwoPi / nq));
  } else {
    std::vector<double> v(1024);
    for (int i = 0; i < 1024; ++i) v[std::size_t(i)] = k.phi1d(t, kTwoPi * i / 1024);
    mass = angular_quadrature(v);
  }
  std::printf("self-check: mass=%.15g |mass-1|=%.3e\n", mass, std::abs(mass - 1.0));
  return std::abs(mass - 1.0) <= 1e-10 ? 0 : kExitNumeric;
}

int cmd_verify(const std::string& suite) {
  const std::vector<CheckResult> checks = verify_suite(suite);
  print_checks(std::cout, checks);
  int failed = 0;
  for (const CheckResult& c : checks) failed += c.pass ? 0 : 1;
  std::printf("%zu checks, %d failed\n", checks.size(), failed);
  return failed == 0 ? 0 : 1;
}

int cmd_mollify(const std::string& preset_name, const std::string& csv_file, int nx, int ny,
                int n, double mass, double theta_star, double epsilon, double alpha,
                const std::string& out_path) {
  SpatialGrid g(nx, ny);
  InitialSpec spec;
  if (!csv_file.empty()) {
    std::ifstream in(csv_file);
    if (!in) throw ConfigError("mollify: cannot read '" + csv_file + "'");
    spec = load_initial_csv(in);
  } else {
    spec = preset(preset_name, g, mass, theta_star);
  }
  const AngularState raw = materialize(spec, n);
  MollifierSpec mol{epsilon, alpha};
  mol.validate();
  const AngularState smooth = mollify(raw, mol);

  const auto [l2_raw, dual_raw] = smoothing_metric(raw);
  const auto [l2_smooth, dual_smooth] = smoothing_metric(smooth);
  std::printf("raw:       mass=%.12g l2=%.12g dual=%.12g\n", raw.mass(), l2_raw, dual_raw);
  std::printf("mollified: mass=%.12g l2=%.12g dual=%.12g\n", smooth.mass(), l2_smooth,
              dual_smooth);

  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ConfigError("mollify: cannot write '" + out_path + "'");
    write_snapshot(out, smooth);
    std::printf("wrote %s\n", out_path.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral crowded active-particle simulator and verification harness"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "Run a configured simulation");
  std::string config_path;
  std::vector<std::string> overrides;
  sim->add_option("--config", config_path, "key=value config file");
  sim->add_option("overrides", overrides, "key=value overrides applied on top of the file");

  auto* ker = app.add_subcommand("kernel", "Evaluate the periodic heat kernel");
  double kt = 0.0, kx = 0.0, kyv = 0.0, ktheta = 0.0;
  bool self_check = false;
  ker->add_option("--t", kt, "time, must be positive")->required();
  ker->add_option("--x", kx, "first coordinate")->required();
  auto* opt_y = ker->add_option("--y", kyv, "second coordinate (3D kernel)");
  auto* opt_theta = ker->add_option("--theta", ktheta, "angle (3D kernel)")->needs(opt_y);
  opt_y->needs(opt_theta);
  ker->add_flag("--self-check", self_check, "also report the quadrature mass defect");

  auto* ver = app.add_subcommand("verify", "Run a named verification suite");
  std::string suite = "all";
  ver->add_option("suite", suite, "linear-exact | invariants | duhamel | smoothing | all");

  auto* mol = app.add_subcommand("mollify", "Mollify initial data and write a snapshot");
  std::string mpreset = "aligned-dirac", mcsv, mout;
  int mnx = 16, mny = 16, mn = 16;
  double mmass = 0.5, mtheta = 0.0, meps = 0.1, malpha = 3.0;
  mol->add_option("--preset", mpreset, "built-in initial data name");
  mol->add_option("--file", mcsv, "CSV sample table instead of a preset");
  mol->add_option("--nx", mnx, "grid points per axis");
  mol->add_option("--ny", mny, "grid points, second axis");
  mol->add_option("--n", mn, "angular truncation");
  mol->add_option("--mass", mmass, "preset mass parameter");
  mol->add_option("--theta-star", mtheta, "concentration angle for the Dirac preset");
  mol->add_option("--epsilon", meps, "mollifier width");
  mol->add_option("--alpha", malpha, "angular width exponent");
  mol->add_option("--out", mout, "snapshot file for the mollified state");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (sim->parsed()) return cmd_simulate(config_path, overrides);
    if (ker->parsed())
      return cmd_kernel(kt, kx, kyv, ktheta, opt_y->count() > 0, self_check);
    if (ver->parsed()) return cmd_verify(suite);
    if (mol->parsed())
      return cmd_mollify(mpreset, mcsv, mnx, mny, mn, mmass, mtheta, meps, malpha, mout);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return kExitNumeric;
  }
  return 0;
}
