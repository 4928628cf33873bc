#include "abp/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <utility>

#include "abp/abp2d.hpp"
#include "abp/diagnostics.hpp"
#include "abp/errors.hpp"
#include "abp/field.hpp"
#include "abp/grid.hpp"
#include "abp/gt1d.hpp"
#include "abp/heat_kernel.hpp"
#include "abp/initial_data.hpp"
#include "abp/integrate.hpp"
#include "abp/threads.hpp"

namespace abp {
namespace {

using Checks = std::vector<CheckResult>;

CheckResult below(std::string name, double measured, double bound) {
  return {std::move(name), std::isfinite(measured) && measured <= bound, measured, bound};
}

CheckResult near(std::string name, double measured, double nominal, double halfwidth) {
  return {std::move(name), std::isfinite(measured) && std::abs(measured - nominal) <= halfwidth,
          measured, halfwidth};
}

CheckResult above(std::string name, double measured, double bound) {
  return {std::move(name), std::isfinite(measured) && measured > bound, measured, bound};
}

// Deterministic fill amplitude for slot (k, p, q, cls), bounded away from
// zero so relative errors are well conditioned. No RNG: the values must be
// identical on every platform.
double fill_amp(int k, int p, int q, int cls) {
  const double t = std::fmod(0.37 * double(7 * k + 3 * p + 5 * q + 2 * cls) + 0.11, 1.0);
  const double amp = 0.5 + 0.45 * t;
  return ((k + p + q + cls) & 1) ? -amp : amp;
}

// --- linear-exact ---------------------------------------------------------

// Pe = 0 shuts the drift off entirely, so the exponential integrator must
// reproduce e^{-(De(p^2+q^2)+k^2)T} per slot up to rounding, independent of
// the step count. Band |p|,|q| <= 3 keeps Nyquist rows out of the picture.
void check_linear_2d(Checks& out) {
  SpatialGrid g(16, 16);
  AbpParams par;
  par.Pe = 0.0;
  par.De = 0.7;
  par.n = 4;
  par.grid = g;

  AngularState init(g, par.n);
  const int hy = g.hy();
  const std::size_t stride = init.a[0].class_stride();
  auto fill = [&](SpectralField& f, int k) {
    std::vector<double> c(f.coeffs().size(), 0.0);
    for (int cls = 0; cls < 4; ++cls)
      for (int p = cls == 2 || cls == 3 ? 1 : 0; p <= 3; ++p)
        for (int q = cls == 1 || cls == 3 ? 1 : 0; q <= 3; ++q)
          c[std::size_t(cls) * stride + std::size_t(p) * (hy + 1) + q] = fill_amp(k, p, q, cls);
    f = SpectralField::from_coeffs(g, std::move(c));
  };
  fill(init.a[0], 0);
  for (int k = 1; k <= par.n; ++k) {
    fill(init.ak(k), k);
    fill(init.bk(k), par.n + k);
  }

  const double T = 0.3;
  IntegratorConfig cfg;  // auto dt resolves to 1e-2, thirty steps
  const auto t0 = std::chrono::steady_clock::now();
  IntegrateResult2D res = integrate(init, par, T, cfg);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  double worst = 0.0;
  auto compare = [&](const SpectralField& got, const SpectralField& was, int k) {
    const std::vector<double>& gc = got.coeffs();
    const std::vector<double>& wc = was.coeffs();
    for (int cls = 0; cls < 4; ++cls)
      for (int p = cls == 2 || cls == 3 ? 1 : 0; p <= 3; ++p)
        for (int q = cls == 1 || cls == 3 ? 1 : 0; q <= 3; ++q) {
          const std::size_t i = std::size_t(cls) * stride + std::size_t(p) * (hy + 1) + q;
          const double exact = wc[i] * std::exp(-linear_symbol(par, k, p, q) * T);
          worst = std::max(worst, std::abs(gc[i] - exact) / std::abs(wc[i]));
        }
  };
  compare(res.state.a[0], init.a[0], 0);
  for (int k = 1; k <= par.n; ++k) {
    compare(res.state.ak(k), init.ak(k), k);
    compare(res.state.bk(k), init.bk(k), k);
  }
  out.push_back(below("2d-linear-closed-form", worst, 1e-10));
  out.push_back(below("2d-linear-runtime", seconds, 5.0));
}

// Two-speed system at Pe = 0: in diagonal variables the modes decay at
// exactly q^2 (density) and q^2 + 2 (polarization).
void check_gt_rates(Checks& out) {
  SpatialGrid g(32);
  const int h = g.hx();
  auto line = [&](std::vector<std::pair<int, double>> cosm,
                  std::vector<std::pair<int, double>> sinm) {
    std::vector<double> c(2 * (std::size_t(h) + 1), 0.0);
    for (auto [q, amp] : cosm) c[std::size_t(q)] = amp;
    for (auto [q, amp] : sinm) c[std::size_t(h) + 1 + q] = amp;
    return SpectralField::from_coeffs(g, std::move(c));
  };
  SpectralField rho0 = line({{0, 0.6}, {1, 0.2}, {3, 0.05}}, {{2, 0.1}});
  SpectralField p0 = line({{1, 0.15}, {2, 0.07}}, {{1, 0.1}, {3, 0.04}});
  GtState init = from_rho_p(rho0, p0, 0.0);

  const double T = 0.4;
  IntegratorConfig cfg;
  IntegrateResultGt res = integrate(init, 0.0, T, cfg);
  auto [rho, p] = rho_p(res.state);

  auto rel = [](double got, double want) { return std::abs(got - want) / std::abs(want); };
  double worst_rho = rel(rho.c1(0), 0.6);
  worst_rho = std::max(worst_rho, rel(rho.c1(1), 0.2 * std::exp(-T)));
  worst_rho = std::max(worst_rho, rel(rho.c1(3), 0.05 * std::exp(-9.0 * T)));
  worst_rho = std::max(worst_rho, rel(rho.s1(2), 0.1 * std::exp(-4.0 * T)));
  double worst_p = rel(p.c1(1), 0.15 * std::exp(-3.0 * T));
  worst_p = std::max(worst_p, rel(p.c1(2), 0.07 * std::exp(-6.0 * T)));
  worst_p = std::max(worst_p, rel(p.s1(1), 0.1 * std::exp(-3.0 * T)));
  worst_p = std::max(worst_p, rel(p.s1(3), 0.04 * std::exp(-11.0 * T)));
  out.push_back(below("gt-decay-rate-rho", worst_rho, 1e-8));
  out.push_back(below("gt-decay-rate-p", worst_p, 1e-8));
}

double kernel_space_l2(const KernelEval& k, double s) {
  const int nodes = 512;
  long double acc = 0.0L;
  for (int j = 0; j < nodes; ++j) {
    const double v = k.phi1d(s, kTwoPi * j / nodes);
    acc += (long double)v * v;
  }
  return double(acc * kTwoPi / nodes);
}

template <class Fn>
double simpson(double a, double b, int panels, Fn&& fn) {
  const double h = (b - a) / panels;
  double acc = fn(a) + fn(b);
  for (int i = 1; i < panels; ++i) acc += fn(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

void check_kernel(Checks& out) {
  KernelEval k;

  double mass_err = 0.0;
  for (double t : {0.02, 0.05, 0.3, 1.0}) {
    std::vector<double> v(256);
    for (int i = 0; i < 256; ++i) v[std::size_t(i)] = k.phi1d(t, kTwoPi * i / 256);
    mass_err = std::max(mass_err, std::abs(angular_quadrature(v) - 1.0));
  }
  out.push_back(below("kernel-phi-mass", mass_err, 1e-10));

  {
    const double t = 0.25;
    const int nq = 48;
    long double mass = 0.0L;
    for (int i = 0; i < nq; ++i)
      for (int j = 0; j < nq; ++j)
        for (int l = 0; l < nq; ++l)
          mass += k.phi3d(t, kTwoPi * i / nq, kTwoPi * j / nq, kTwoPi * l / nq);
    mass *= (long double)(kTwoPi / nq) * (kTwoPi / nq) * (kTwoPi / nq);
    out.push_back(below("kernel-phi3d-mass", std::abs(double(mass) - 1.0), 1e-10));
  }

  double sp = 0.0;
  for (int i = 0; i < 256; ++i) {
    const double x = kTwoPi * i / 256;
    sp = std::max(sp, std::abs(k.phi1d_series(0.05, x) - k.phi1d_product(0.05, x)));
  }
  out.push_back(below("kernel-series-product", sp, 1e-12));

  // Closed form against the nested time-space quadrature. The time integral
  // runs in u with s = u^2; below u0 the squared norm is 1/(2 sqrt(2 pi s))
  // up to corrections under e^{-5000}, so the head integrates in closed
  // form. The accumulated closed form carries the coefficient-normalized
  // norm: pi times the plain squared space integral plus t/2.
  {
    const double t = 0.5;
    const double u0 = 0.03;
    const double head = u0 / std::sqrt(kTwoPi);
    const double quad =
        head + simpson(u0, std::sqrt(t), 256,
                       [&](double u) { return 2.0 * u * kernel_space_l2(k, u * u); });
    const double closed = k.phi1d_l2_time_integral(t);
    out.push_back(below("kernel-l2-closed-form", std::abs(closed - (kPi * quad + t / 2.0)), 1e-8));

    const double frozen = std::max(
        std::abs(k.phi1d_l2_time_integral(0.5) - 1.1362309983600712751),
        std::abs(k.phi1d_l2_time_integral(0.05) - 0.30524956081989643497));
    out.push_back(below("kernel-l2-oracle", frozen, 1e-12));
  }

  // The product branch is nonnegative factor by factor; the series branch
  // carries cancellation noise of a few ulp where the true minimum sits far
  // below double resolution, so the defect is measured against the rounding
  // floor rather than exact zero.
  double low = 1.0;
  for (double t : {1e-4, 1e-3, 0.01, 0.049, 0.05, 0.2, 1.0})
    for (int i = 0; i < 512; ++i) low = std::min(low, k.phi1d(t, kTwoPi * i / 512));
  out.push_back(below("kernel-nonnegative", std::max(0.0, -low), 1e-13));
}

// --- invariants ------------------------------------------------------------

AbpParams preset_params(SpatialGrid g, double Pe, double De, int n) {
  AbpParams par;
  par.Pe = Pe;
  par.De = De;
  par.n = n;
  par.grid = g;
  par.phi_mass = 0.5;
  return par;
}

void check_mass_drift(Checks& out) {
  SpatialGrid g(16, 16);
  AbpParams par = preset_params(g, 1.0, 1.0, 3);
  AngularState init = materialize(preset("mixed-modes", g), par.n);

  IntegratorConfig cfg;
  cfg.dt = 5e-4;  // exactly 1000 steps over T = 0.5, well under the CFL bound
  IntegrateResult2D res = integrate(init, par, 0.5, cfg);
  const double m0 = res.series.front().mass;
  double drift = 0.0;
  for (const DiagnosticsRecord& r : res.series)
    drift = std::max(drift, std::abs(r.mass - m0) / std::abs(m0));
  out.push_back(below("mass-drift", drift, 1e-11));
}

void check_preset_runs(Checks& out) {
  SpatialGrid g(16, 16);
  AbpParams par = preset_params(g, 1.0, 1.0, 3);
  IntegratorConfig cfg;
  cfg.observe_cadence = 0.025;
  for (const std::string& name : preset_names()) {
    if (name == "aligned-dirac") continue;  // rough data has its own suite
    AngularState init = materialize(preset(name, g), par.n);
    IntegrateResult2D res = integrate(init, par, 0.5, cfg);

    BoundsOutcome box = check_bounds(res.series, 1e-6);
    double excursion = std::max({-box.worst_min_f, -box.worst_min_rho,
                                 box.worst_max_rho - 1.0, 0.0});
    CheckResult region = below("invariant-region-" + name, excursion, 1e-6);
    region.pass = region.pass && box.pass && box.clip_total == 0;
    out.push_back(region);

    GronwallOutcome env = check_gronwall(res.series, par);
    CheckResult grw = above("gronwall-" + name, env.worst_margin, 0.0);
    grw.pass = grw.pass && env.pass;
    out.push_back(grw);
  }
}

double energy_residual(const AbpParams& par, const AngularState& init, double dt) {
  IntegratorConfig cfg;
  cfg.dt = dt;
  IntegrateResult2D res = integrate(init, par, 0.1, cfg);
  const DiagnosticsRecord& a = res.series.front();
  const DiagnosticsRecord& z = res.series.back();
  return std::abs(z.energy - a.energy + 2.0 * z.dissipation - 2.0 * z.drift_work);
}

void check_energy_order(Checks& out) {
  SpatialGrid g(16, 16);
  AbpParams par = preset_params(g, 1.0, 0.8, 2);
  AngularState init = materialize(preset("one-mode-perturbation", g), par.n);
  const double r0 = energy_residual(par, init, 2e-3);
  const double r1 = energy_residual(par, init, 1e-3);
  const double r2 = energy_residual(par, init, 5e-4);
  const double o1 = std::log2(r0 / r1);
  const double o2 = std::log2(r1 / r2);
  CheckResult c = near("energy-balance-order", o2, 2.0, 0.2);
  c.pass = c.pass && std::abs(o1 - 2.0) <= 0.2;
  out.push_back(c);
}

void check_gt_box(Checks& out) {
  SpatialGrid g(32);
  IntegratorConfig cfg;
  cfg.observe_cadence = 0.025;
  for (const std::string& name : gt_preset_names()) {
    GtState init = gt_preset(name, g);
    double lowest = 1.0, highest = 0.0;
    ObserverGt watch = [&](const GtState& s, const DiagnosticsRecord&) {
      for (double v : s.fR.values()) {
        lowest = std::min(lowest, v);
        highest = std::max(highest, v);
      }
      for (double v : s.fL.values()) {
        lowest = std::min(lowest, v);
        highest = std::max(highest, v);
      }
    };
    integrate(init, 1.0, 0.5, cfg, watch);
    const double excursion = std::max({-lowest, highest - 1.0, 0.0});
    out.push_back(below("gt-box-" + name, excursion, 1e-6));
  }
}

void check_determinism(Checks& out) {
  SpatialGrid g(16, 16);
  AbpParams par = preset_params(g, 1.0, 1.0, 3);
  AngularState init = materialize(preset("mixed-modes", g), par.n);
  IntegratorConfig cfg;
  cfg.observe_cadence = 0.05;

  auto run_csv = [&](int workers) {
    set_worker_count(workers);
    IntegrateResult2D res = integrate(init, par, 0.2, cfg);
    std::ostringstream csv;
    write_diagnostics_csv(csv, res.series);
    return std::move(csv).str();
  };
  const std::string one = run_csv(1);
  const std::string four = run_csv(4);
  set_worker_count(0);
  out.push_back({"determinism-worker-count", one == four, one == four ? 0.0 : 1.0, 0.0});
}

// --- duhamel ---------------------------------------------------------------

// Reference configurations for the integral-equation reconstruction; the
// composite trapezoid in time makes the residual fall like the snapshot
// spacing squared, so halving the snapshot count scales it by about 4.
void check_duhamel_1d(Checks& out) {
  SpatialGrid g(32);
  GtState init = gt_preset("gt-pulse", g);
  const double T = 0.5;
  IntegratorConfig cfg;
  cfg.dt = T / 4096;
  cfg.observe_cadence = T / 128;

  std::vector<GtState> traj;
  ObserverGt keep = [&](const GtState& s, const DiagnosticsRecord&) { traj.push_back(s); };
  integrate(init, 0.8, T, cfg, keep);

  std::vector<GtState> coarse;
  for (std::size_t i = 0; i < traj.size(); i += 2) coarse.push_back(traj[i]);

  const double fine_res = duhamel_residual_1d(traj, 0.8).max_residual;
  const double coarse_res = duhamel_residual_1d(coarse, 0.8).max_residual;
  out.push_back(below("duhamel-1d-residual", fine_res, 5e-4));
  out.push_back(near("duhamel-1d-ratio", coarse_res / fine_res, 4.0, 0.5));
}

void check_duhamel_2d(Checks& out) {
  SpatialGrid g(16, 16);
  AbpParams par = preset_params(g, 0.5, 1.0, 2);
  AngularState init = materialize(preset("one-mode-perturbation", g), par.n);
  const double T = 0.2;
  IntegratorConfig cfg;
  cfg.dt = T / 2048;
  cfg.observe_cadence = T / 64;

  std::vector<AngularState> traj;
  Observer2D keep = [&](const AngularState& s, const DiagnosticsRecord&) { traj.push_back(s); };
  integrate(init, par, T, cfg, keep);

  std::vector<AngularState> coarse;
  for (std::size_t i = 0; i < traj.size(); i += 2) coarse.push_back(traj[i]);

  const double fine_res = duhamel_residual_3d(traj, par).max_residual;
  const double coarse_res = duhamel_residual_3d(coarse, par).max_residual;
  out.push_back(below("duhamel-2d-residual", fine_res, 5e-4));
  out.push_back(near("duhamel-2d-ratio", coarse_res / fine_res, 4.0, 0.5));
}

void check_etd_order(Checks& out) {
  SpatialGrid g(16, 16);
  AbpParams par = preset_params(g, 1.0, 1.0, 2);
  AngularState init = materialize(preset("one-mode-perturbation", g), par.n);

  auto final_flat = [&](double dt) {
    IntegratorConfig cfg;
    cfg.dt = dt;
    return flatten(integrate(init, par, 0.1, cfg).state);
  };
  auto dist = [](const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
  };
  const std::vector<double> u0 = final_flat(2e-3);
  const std::vector<double> u1 = final_flat(1e-3);
  const std::vector<double> u2 = final_flat(5e-4);
  const double order = std::log2(dist(u0, u1) / dist(u1, u2));
  out.push_back(near("etd-rk2-order", order, 2.0, 0.2));
}

// --- smoothing ---------------------------------------------------------

double final_l2(const AngularState& init, const AbpParams& par, double dt) {
  IntegratorConfig cfg;
  cfg.dt = dt;
  // The l1-based CFL estimate overshoots badly at large n; the drift speed
  // of these runs is O(1), so a fixed step is both stable and comparable
  // across truncations.
  cfg.enforce_stability = false;
  IntegrateResult2D res = integrate(init, par, 0.1, cfg);
  return smoothing_metric(res.state).first;
}

void check_smoothing(Checks& out) {
  SpatialGrid g(16, 16);

  {
    InitialSpec dir = preset("aligned-dirac", g);
    MollifierSpec mol;  // epsilon 0.1, alpha 3
    AngularState init = mollify(dir, mol, 16);
    AbpParams par = preset_params(g, 1.0, 1.0, 16);
    out.push_back(below("smoothing-l2-finite-mollified", final_l2(init, par, 1e-3), 10.0));
  }

  InitialSpec dir = preset("aligned-dirac", g);
  auto raw_run = [&](int n, double Pe, double dt) {
    AngularState init = materialize(dir, n);
    AbpParams par = preset_params(g, Pe, 1.0, n);
    return final_l2(init, par, dt);
  };
  // Pe = 0 is pure mode decay: the n = 16 and n = 32 runs agree to the size
  // of the first dropped mode, e^{-17^2 * 0.1}. Pe = 1 is a regression pin.
  out.push_back(below("smoothing-n-stability-pe0",
                      std::abs(raw_run(32, 0.0, 1e-2) - raw_run(16, 0.0, 1e-2)), 1e-6));
  out.push_back(below("smoothing-n-stability-pe1",
                      std::abs(raw_run(32, 1.0, 1e-3) - raw_run(16, 1.0, 1e-3)), 1e-3));
}

void check_mollifier(Checks& out) {
  SpatialGrid g(16, 16);
  InitialSpec dir = preset("aligned-dirac", g);
  const AngularState raw = materialize(dir, 16);

  MollifierSpec mol;
  AngularState smooth = mollify(raw, mol);
  out.push_back(below("mollifier-mass",
                      std::abs(smooth.mass() - raw.mass()) / std::abs(raw.mass()), 1e-12));

  double excursion = 0.0;
  auto dual_gap = [&](double eps) {
    AngularState m = mollify(raw, {eps, 3.0});
    for (double v : m.rho().values())
      excursion = std::max({excursion, -v, v - 1.0});
    AngularState diff = raw;
    for (std::size_t i = 0; i < diff.a.size(); ++i) diff.a[i] -= m.a[i];
    for (std::size_t i = 0; i < diff.b.size(); ++i) diff.b[i] -= m.b[i];
    return smoothing_metric(diff).second;
  };
  const double d20 = dual_gap(0.2);
  const double d10 = dual_gap(0.1);
  const double d05 = dual_gap(0.05);
  out.push_back(below("mollifier-rho-box", excursion, 1e-9));
  out.push_back(above("mollifier-dual-monotone", std::min({d20 - d10, d10 - d05, d05}), 0.0));
}

void run_suite(const std::string& suite, Checks& out) {
  if (suite == "linear-exact") {
    check_linear_2d(out);
    check_gt_rates(out);
    check_kernel(out);
  } else if (suite == "invariants") {
    check_mass_drift(out);
    check_preset_runs(out);
    check_energy_order(out);
    check_gt_box(out);
    check_determinism(out);
  } else if (suite == "duhamel") {
    check_duhamel_1d(out);
    check_duhamel_2d(out);
    check_etd_order(out);
  } else if (suite == "smoothing") {
    check_smoothing(out);
    check_mollifier(out);
  } else {
    throw ConfigError("verify: unknown suite '" + suite + "'");
  }
}

}  // namespace

std::vector<CheckResult> verify_suite(const std::string& suite) {
  Checks out;
  if (suite == "all") {
    for (const char* s : {"linear-exact", "invariants", "duhamel", "smoothing"})
      run_suite(s, out);
  } else {
    run_suite(suite, out);
  }
  return out;
}

std::vector<std::string> verify_suite_names() {
  return {"linear-exact", "invariants", "duhamel", "smoothing", "all"};
}

void print_checks(std::ostream& out, const std::vector<CheckResult>& checks) {
  char line[160];
  for (const CheckResult& c : checks) {
    std::snprintf(line, sizeof line, "%-32s %s  measured=%.9g  bound=%.9g\n",
                  c.name.c_str(), c.pass ? "PASS" : "FAIL", c.measured, c.bound);
    out << line;
  }
}

}  // namespace abp
