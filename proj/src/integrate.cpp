#include "abp/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "abp/errors.hpp"
#include "abp/kern.hpp"

namespace abp {

void IntegratorConfig::validate() const {
  if (!(dt >= 0.0) || !std::isfinite(dt))
    throw ConfigError("dt must be finite and >= 0 (0 = automatic)");
  if (!(cfl_safety > 0.0) || cfl_safety > 1.0)
    throw ConfigError("cfl_safety must lie in (0, 1]");
  if (max_steps < 1) throw ConfigError("max_steps must be at least 1");
  if (!(observe_cadence >= 0.0) || !std::isfinite(observe_cadence))
    throw ConfigError("observe_cadence must be finite and >= 0");
}

double exp_factor(double rate, double dt) { return std::exp(-rate * dt); }

namespace {

long first_nonfinite(const std::vector<double>& u) {
  for (std::size_t i = 0; i < u.size(); ++i)
    if (!std::isfinite(u[i])) return long(i);
  return -1;
}

// Per-slot decay e^{-z} and the step-scaled phi weights h*phi1, h*phi2 with
//   phi1(z) = (1 - e^{-z})/z,  phi2(z) = (e^{-z} - 1 + z)/z^2.
// Near z = 0 both quotients cancel catastrophically; a short Taylor series
// takes over below 1e-4 (next omitted term < 1e-17 relative).
struct EtdTables {
  double h = -1.0;
  std::vector<double> decay, f1, f2;

  void build(const std::vector<double>& rate, double h_) {
    h = h_;
    decay.resize(rate.size());
    f1.resize(rate.size());
    f2.resize(rate.size());
    for (std::size_t i = 0; i < rate.size(); ++i) {
      double z = rate[i] * h;
      decay[i] = std::exp(-z);
      if (z < 1e-4) {
        f1[i] = h * (1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0);
        f2[i] = h * (0.5 - z / 6.0 + z * z / 24.0 - z * z * z / 120.0);
      } else {
        f1[i] = h * (-std::expm1(-z) / z);
        f2[i] = h * ((std::expm1(-z) + z) / (z * z));
      }
    }
  }
};

// One step given nu = N(u) on entry; nu is NOT refreshed here, the caller
// re-evaluates after the step (and reuses that as the next entry value).
void etd_step(std::vector<double>& u, std::vector<double>& stage, std::vector<double>& nstage,
              std::vector<double>& nu, const FlatSystem& sys, const EtdTables& tab,
              Scheme scheme) {
  const std::size_t m = u.size();
  kern::ew_axpby(stage.data(), tab.decay.data(), u.data(), tab.f1.data(), nu.data(), m);
  if (scheme == Scheme::EtdRk2) {
    sys.nonlinear(stage, nstage);
    kern::ew_acc_wdiff(stage.data(), tab.f2.data(), nstage.data(), nu.data(), m);
  }
  u.swap(stage);
}

double weighted_sq(const std::vector<double>& rate, const std::vector<double>& u,
                   const std::vector<double>& w) {
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += rate[i] * u[i] * u[i] * w[i];
  return acc;
}

double weighted_pair(const std::vector<double>& u, const std::vector<double>& nu,
                     const std::vector<double>& w) {
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * nu[i] * w[i];
  return acc;
}

double l1_total(const std::vector<double>& u) {
  double acc = 0.0;
  for (double v : u) acc += std::abs(v);
  return acc;
}

void check_flat(const std::vector<double>& u, const FlatSystem& sys) {
  if (u.empty()) throw ConfigError("empty flat state");
  if (sys.rate.size() != u.size() || sys.weight.size() != u.size())
    throw ConfigError("flat system tables do not match the state length");
  if (!sys.nonlinear) throw ConfigError("flat system has no nonlinear callback");
  if (!(sys.dx > 0.0)) throw ConfigError("flat system grid spacing must be positive");
}

using FlatObserver = std::function<void(const std::vector<double>&, double, const StepStats&)>;

void run_flat(std::vector<double>& u, const FlatSystem& sys, double T,
              const IntegratorConfig& cfg, const FlatObserver& observe, StepStats& stats) {
  check_flat(u, sys);
  if (long bad = first_nonfinite(u); bad >= 0)
    throw NumericError("non-finite value", "initial state", bad);

  const double eps_t = 1e-12 * std::max(1.0, T);
  const double cadence = cfg.observe_cadence;
  const bool every_step = cadence == 0.0;

  std::vector<double> nu(u.size()), stage(u.size()), nstage(u.size());
  sys.nonlinear(u, nu);
  double d_prev = weighted_sq(sys.rate, u, sys.weight);
  double w_prev = weighted_pair(u, nu, sys.weight);
  observe(u, 0.0, stats);

  EtdTables tab;
  double h_target = 0.0;
  bool clamped = false, warned = false;
  auto refresh_policy = [&]() {
    double speed = sys.drift_speed ? sys.drift_speed(u) : 0.0;
    double bound = speed > 0.0 ? cfg.cfl_safety * sys.dx / speed
                               : std::numeric_limits<double>::infinity();
    clamped = false;
    if (cfg.dt == 0.0) {
      h_target = std::min(bound, 1e-2);
    } else if (cfg.enforce_stability && cfg.dt > bound) {
      h_target = bound;
      clamped = true;
      if (!warned) {
        std::fprintf(stderr,
                     "integrate: dt %.3e above stability bound %.3e, clamping\n",
                     cfg.dt, bound);
        warned = true;
      }
    } else {
      h_target = cfg.dt;
    }
  };

  double t = 0.0;
  long next_m = 1;
  while (t < T - eps_t) {
    if (stats.steps % 10 == 0) refresh_policy();

    bool obs_at_target = false;
    double target = T;
    if (!every_step) {
      double tn = double(next_m) * cadence;
      if (tn <= T + eps_t) {
        target = std::min(tn, T);
        obs_at_target = true;
      }
    }
    // Snap the step onto the target whenever the remaining gap is within one
    // nominal step (plus the landing tolerance): an accumulated-rounding gap
    // one ulp above h_target must still land, or the observation is lost and
    // the loop can terminate an ulp short of T.
    const double gap = target - t;
    const double h = gap <= h_target + eps_t ? gap : h_target;

    if (stats.steps >= cfg.max_steps)
      throw NumericError("step limit reached", "integrate", stats.steps);
    if (h != tab.h) tab.build(sys.rate, h);
    etd_step(u, stage, nstage, nu, sys, tab, cfg.scheme);
    ++stats.steps;
    if (clamped) ++stats.clamped_steps;
    if (long bad = first_nonfinite(u); bad >= 0)
      throw NumericError("non-finite value", "step " + std::to_string(stats.steps), bad);

    sys.nonlinear(u, nu);
    double t_new = (h == gap) ? target : t + h;
    double d_now = weighted_sq(sys.rate, u, sys.weight);
    double w_now = weighted_pair(u, nu, sys.weight);
    stats.dissipation += 0.5 * h * (d_prev + d_now);
    stats.drift_work += 0.5 * h * (w_prev + w_now);
    d_prev = d_now;
    w_prev = w_now;

    bool landed = obs_at_target && t_new == target;
    if (landed) ++next_m;
    if (every_step || landed) observe(u, t_new, stats);
    t = t_new;
  }
}

std::size_t flat_size(const AngularState& s) {
  return s.a[0].coeff_count() * (2 * s.n_modes() + 1);
}

void flatten_into(const AngularState& s, std::vector<double>& out) {
  out.resize(flat_size(s));
  double* dst = out.data();
  auto put = [&dst](const SpectralField& f) {
    const auto& c = f.coeffs();
    dst = std::copy(c.begin(), c.end(), dst);
  };
  for (const SpectralField& f : s.a) put(f);
  for (const SpectralField& f : s.b) put(f);
}

void flatten_pair_into(const SpectralField& rho, const SpectralField& p,
                       std::vector<double>& out) {
  const auto& cr = rho.coeffs();
  const auto& cp = p.coeffs();
  out.resize(cr.size() + cp.size());
  std::copy(cp.begin(), cp.end(), std::copy(cr.begin(), cr.end(), out.data()));
}

}  // namespace

std::vector<double> flatten(const AngularState& s) {
  std::vector<double> u;
  flatten_into(s, u);
  return u;
}

void unflatten(const std::vector<double>& u, AngularState& s) {
  if (u.size() != flat_size(s))
    throw ConfigError("flat vector length does not match the state layout");
  const double* src = u.data();
  auto take = [&src](SpectralField& f) {
    auto& c = f.coeffs_mut();
    std::copy(src, src + c.size(), c.begin());
    src += c.size();
  };
  for (SpectralField& f : s.a) take(f);
  for (SpectralField& f : s.b) take(f);
}

std::vector<double> flatten_gt(const GtState& s) {
  std::vector<double> u;
  auto [rho, p] = rho_p(s);
  flatten_pair_into(rho, p, u);
  return u;
}

void unflatten_gt(const std::vector<double>& u, GtState& s) {
  std::size_t m = s.fR.coeff_count();
  if (u.size() != 2 * m)
    throw ConfigError("flat vector length does not match the state layout");
  SpatialGrid g = s.fR.grid();
  std::vector<double> cr(u.begin(), u.begin() + long(m));
  std::vector<double> cp(u.begin() + long(m), u.end());
  GtState rebuilt = from_rho_p(SpectralField::from_coeffs(g, std::move(cr)),
                               SpectralField::from_coeffs(g, std::move(cp)), s.time);
  s.fR = std::move(rebuilt.fR);
  s.fL = std::move(rebuilt.fL);
}

FlatSystem flat_system(const AbpParams& par) {
  par.validate();
  const SpatialGrid g = par.grid;
  const int hx = g.hx(), hy = g.hy();
  const std::size_t cls = std::size_t(hx + 1) * std::size_t(hy + 1);

  FlatSystem sys;
  sys.dx = std::min(g.dx(), g.dy());
  sys.rate.reserve(4 * cls * std::size_t(2 * par.n + 1));
  sys.weight.reserve(sys.rate.capacity());
  auto push_field = [&](int k) {
    for (int cl = 0; cl < 4; ++cl)
      for (int p = 0; p <= hx; ++p)
        for (int q = 0; q <= hy; ++q) {
          sys.rate.push_back(linear_symbol(par, k, p, q));
          double wx = (p == 0 || p == hx) ? kTwoPi : kPi;
          double wy = (q == 0 || q == hy) ? kTwoPi : kPi;
          sys.weight.push_back(wx * wy);
        }
  };
  for (int k = 0; k <= par.n; ++k) push_field(k);
  for (int k = 1; k <= par.n; ++k) push_field(k);

  sys.nonlinear = [par, scratch = AngularState(g, par.n)](
                      const std::vector<double>& u, std::vector<double>& out) mutable {
    unflatten(u, scratch);
    flatten_into(drift_rhs(scratch, par), out);
  };
  sys.drift_speed = [pe = par.Pe](const std::vector<double>& u) {
    return 2.0 * pe * l1_total(u);
  };
  return sys;
}

FlatSystem flat_system_gt(SpatialGrid g, double Pe) {
  if (!g.one_dim() || g.nx < 4 || g.nx % 2 != 0)
    throw ConfigError("1D system needs an even circle grid with nx >= 4");
  if (!(Pe >= 0.0)) throw ConfigError("Pe must be >= 0");
  const int h = g.hx();

  FlatSystem sys;
  sys.dx = g.dx();
  auto push_field = [&](double shift) {
    for (int cl = 0; cl < 2; ++cl)
      for (int p = 0; p <= h; ++p) {
        sys.rate.push_back(double(p) * double(p) + shift);
        sys.weight.push_back(0.5 * ((p == 0 || p == h) ? kTwoPi : kPi));
      }
  };
  push_field(0.0);  // rho: pure diffusion
  push_field(2.0);  // p: diffusion plus the flip relaxation

  sys.nonlinear = [Pe, g](const std::vector<double>& u, std::vector<double>& out) {
    std::size_t m = 2 * std::size_t(g.hx() + 1);
    std::vector<double> cr(u.begin(), u.begin() + long(m));
    std::vector<double> cp(u.begin() + long(m), u.end());
    SpectralField rho = SpectralField::from_coeffs(g, std::move(cr));
    SpectralField p = SpectralField::from_coeffs(g, std::move(cp));
    auto [dr, dp] = gt_drift_rho_p(rho, p, Pe);
    flatten_pair_into(dr, dp, out);
  };
  sys.drift_speed = [Pe](const std::vector<double>& u) { return 2.0 * Pe * l1_total(u); };
  return sys;
}

void flat_advance(std::vector<double>& u, const FlatSystem& sys, double h, Scheme scheme) {
  check_flat(u, sys);
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("step size must be positive");
  std::vector<double> nu(u.size()), stage(u.size()), nstage(u.size());
  sys.nonlinear(u, nu);
  EtdTables tab;
  tab.build(sys.rate, h);
  etd_step(u, stage, nstage, nu, sys, tab, scheme);
  if (long bad = first_nonfinite(u); bad >= 0)
    throw NumericError("non-finite value", "step 1", bad);
}

void advance(AngularState& s, const AbpParams& par, double dt, Scheme scheme) {
  if (int(s.n_modes()) != par.n)
    throw ConfigError("state truncation does not match params.n");
  FlatSystem sys = flat_system(par);
  std::vector<double> u = flatten(s);
  flat_advance(u, sys, dt, scheme);
  unflatten(u, s);
  s.time += dt;
}

void advance(GtState& s, double Pe, double dt, Scheme scheme) {
  FlatSystem sys = flat_system_gt(s.fR.grid(), Pe);
  std::vector<double> u = flatten_gt(s);
  flat_advance(u, sys, dt, scheme);
  unflatten_gt(u, s);
  s.time += dt;
}

IntegrateResult2D integrate(const AngularState& initial, const AbpParams& par, double T,
                            const IntegratorConfig& cfg, const Observer2D& observe) {
  par.validate();
  cfg.validate();
  if (!(T >= 0.0) || !std::isfinite(T))
    throw ConfigError("integration horizon T must be finite and >= 0");
  if (int(initial.n_modes()) != par.n)
    throw ConfigError("state truncation does not match params.n");
  if (initial.a[0].grid() != par.grid)
    throw ConfigError("state grid does not match params.grid");

  FlatSystem sys = flat_system(par);
  std::vector<double> u = flatten(initial);
  IntegrateResult2D res{initial, {}, {}};
  AngularState scratch = initial;
  auto flat_obs = [&](const std::vector<double>& uu, double t, const StepStats& st) {
    unflatten(uu, scratch);
    scratch.time = initial.time + t;
    DiagnosticsRecord r = record(scratch, par);
    r.dissipation = st.dissipation;
    r.drift_work = st.drift_work;
    res.series.push_back(r);
    if (observe) observe(scratch, r);
  };
  run_flat(u, sys, T, cfg, flat_obs, res.stats);
  unflatten(u, res.state);
  res.state.time = initial.time + T;
  return res;
}

IntegrateResultGt integrate(const GtState& initial, double Pe, double T,
                            const IntegratorConfig& cfg, const ObserverGt& observe) {
  cfg.validate();
  if (!(T >= 0.0) || !std::isfinite(T))
    throw ConfigError("integration horizon T must be finite and >= 0");

  FlatSystem sys = flat_system_gt(initial.fR.grid(), Pe);
  std::vector<double> u = flatten_gt(initial);
  IntegrateResultGt res{initial, {}, {}};
  GtState scratch = initial;
  auto flat_obs = [&](const std::vector<double>& uu, double t, const StepStats& st) {
    unflatten_gt(uu, scratch);
    scratch.time = initial.time + t;
    DiagnosticsRecord r = record(scratch);
    r.dissipation = st.dissipation;
    r.drift_work = st.drift_work;
    res.series.push_back(r);
    if (observe) observe(scratch, r);
  };
  run_flat(u, sys, T, cfg, flat_obs, res.stats);
  unflatten_gt(u, res.state);
  res.state.time = initial.time + T;
  return res;
}

}  // namespace abp
