#include "abp/heat_kernel.hpp"

#include <cmath>
#include <string>

#include "abp/errors.hpp"

namespace abp {

namespace {

void require_positive_time(double t) {
  if (!(t > 0.0)) throw ConfigError("kernel time must be positive, got " + std::to_string(t));
}

constexpr double kSeriesProductCrossover = 0.05;

}  // namespace

KernelEval::KernelEval(double eps_ser) : eps_(eps_ser) {
  if (!(eps_ser > 0.0 && eps_ser < 1.0))
    throw ConfigError("series tolerance must lie in (0,1), got " + std::to_string(eps_ser));
}

int KernelEval::truncation_index(double t) const {
  require_positive_time(t);
  int n = int(std::ceil(std::sqrt(std::max(0.0, -std::log(eps_) / t))));
  if (n < 1) n = 1;
  while (std::exp(-double(n) * n * t) >= eps_) ++n;
  return n;
}

double KernelEval::phi1d_series(double t, double x) const {
  int n = truncation_index(t);
  double s = 0.0;
  for (; n >= 1; --n) s += std::exp(-double(n) * n * t) * std::cos(n * x);
  return 1.0 / kTwoPi + s / kPi;
}

double KernelEval::phi1d_product(double t, double x) const {
  require_positive_time(t);
  // keep factors until both deviations from 1 are under eps/4
  int nmax = 1 + int((-std::log(eps_ / 4.0) / t + 1.0) / 2.0);
  double c = std::cos(x);
  double prod = 1.0;
  for (int n = 1; n <= nmax; ++n) {
    double odd = std::exp(-(2.0 * n - 1.0) * t);
    prod *= (1.0 - std::exp(-2.0 * n * t)) * (1.0 + 2.0 * odd * c + odd * odd);
  }
  return prod / kTwoPi;
}

double KernelEval::phi1d(double t, double x) const {
  require_positive_time(t);
  return t >= kSeriesProductCrossover ? phi1d_series(t, x) : phi1d_product(t, x);
}

double KernelEval::phi1d_l2_time_integral(double t) const {
  require_positive_time(t);
  int n = truncation_index(2.0 * t);
  double head = 0.0, partial = 0.0;
  for (int m = n; m >= 1; --m) {
    double w = 2.0 * double(m) * m;
    head += -std::expm1(-w * t) / w;
    partial += 1.0 / w;
  }
  double tail = std::max(0.0, kPi * kPi / 12.0 - partial);
  return t + head + tail;
}

double KernelEval::phi3d(double t, double x, double y, double theta) const {
  return phi1d(t, x) * phi1d(t, y) * phi1d(t, theta);
}

SpectralField heat_convolve(const SpectralField& psi, double t, double rate) {
  if (!psi.one_dim()) return heat_convolve(psi, t, rate, rate);
  if (t < 0.0) throw ConfigError("convolution time must be nonnegative");
  const auto& c = psi.coeffs();
  std::vector<double> out(c.size());
  int h = psi.grid().hx();
  std::size_t st = psi.class_stride();
  for (int p = 0; p <= h; ++p) {
    double m = std::exp(-rate * double(p) * p * t);
    out[std::size_t(p)] = m * c[std::size_t(p)];
    out[st + p] = m * c[st + p];
  }
  return SpectralField::from_coeffs(psi.grid(), std::move(out));
}

SpectralField heat_convolve(const SpectralField& psi, double t, double rate_x, double rate_y) {
  if (t < 0.0) throw ConfigError("convolution time must be nonnegative");
  if (psi.one_dim()) throw ConfigError("per-axis rates need a 2D field");
  const auto& c = psi.coeffs();
  std::vector<double> out(c.size());
  int hx = psi.grid().hx(), hy = psi.grid().hy();
  std::size_t st = psi.class_stride();
  for (int p = 0; p <= hx; ++p)
    for (int q = 0; q <= hy; ++q) {
      std::size_t k = std::size_t(p) * (hy + 1) + q;
      double m = std::exp(-(rate_x * double(p) * p + rate_y * double(q) * q) * t);
      for (int cls = 0; cls < 4; ++cls) out[cls * st + k] = m * c[cls * st + k];
    }
  return SpectralField::from_coeffs(psi.grid(), std::move(out));
}

namespace {

// Uniform-cadence check shared by both reconstructions; returns the spacing.
double snapshot_spacing(const std::vector<double>& times) {
  if (times.size() < 2) throw ConfigError("duhamel reconstruction needs at least two snapshots");
  if (std::abs(times.front()) > 1e-12) throw ConfigError("snapshots must start at time 0");
  double dt = times[1] - times[0];
  if (!(dt > 0.0)) throw ConfigError("snapshot times must increase");
  double scale = std::max(1.0, times.back());
  for (std::size_t m = 0; m < times.size(); ++m)
    if (std::abs(times[m] - double(m) * dt) > 1e-9 * scale)
      throw ConfigError("snapshots must sit on a uniform time lattice");
  return dt;
}

}  // namespace

DuhamelReport duhamel_residual_1d(const std::vector<GtState>& traj, double Pe) {
  std::vector<double> times;
  times.reserve(traj.size());
  for (const auto& s : traj) times.push_back(s.time);
  double dt = snapshot_spacing(times);
  const SpatialGrid& g = traj.front().fR.grid();
  for (const auto& s : traj)
    if (!(s.fR.grid() == g) || !(s.fL.grid() == g))
      throw ConfigError("snapshots must share one grid");
  double T = times.back();

  SpectralField acc = heat_convolve(traj.front().fR, T, 1.0);
  for (std::size_t m = 0; m < traj.size(); ++m) {
    GtState d = gt_rhs(traj[m], Pe);
    SpectralField src = std::move(d.fR);
    src -= traj[m].fR.laplacian();
    double w = dt * ((m == 0 || m + 1 == traj.size()) ? 0.5 : 1.0);
    acc.axpy(w, heat_convolve(src, T - times[m], 1.0));
  }

  SpectralField res = traj.back().fR;
  res -= acc;
  DuhamelReport rep;
  rep.snapshots = int(traj.size());
  rep.residual = res.values();
  for (double v : rep.residual) rep.max_residual = std::max(rep.max_residual, std::abs(v));
  return rep;
}

DuhamelReport duhamel_residual_3d(const std::vector<AngularState>& traj, const AbpParams& par) {
  par.validate();
  std::vector<double> times;
  times.reserve(traj.size());
  for (const auto& s : traj) times.push_back(s.time);
  double dt = snapshot_spacing(times);
  for (const auto& s : traj)
    if (s.n_modes() != par.n) throw ConfigError("snapshot mode count does not match params");
  double T = times.back();
  int n = par.n;

  auto propagate = [&](const SpectralField& f, int k, double tau) {
    SpectralField out = heat_convolve(f, tau, par.De, par.De);
    out *= std::exp(-double(k) * k * tau);
    return out;
  };

  std::vector<SpectralField> acc_a, acc_b;
  for (int k = 0; k <= n; ++k) acc_a.push_back(propagate(traj.front().ak(k), k, T));
  for (int k = 1; k <= n; ++k) acc_b.push_back(propagate(traj.front().bk(k), k, T));

  for (std::size_t m = 0; m < traj.size(); ++m) {
    AngularState d = drift_rhs(traj[m], par);
    double tau = T - times[m];
    double w = dt * ((m == 0 || m + 1 == traj.size()) ? 0.5 : 1.0);
    for (int k = 0; k <= n; ++k) acc_a[std::size_t(k)].axpy(w, propagate(d.ak(k), k, tau));
    for (int k = 1; k <= n; ++k) acc_b[std::size_t(k) - 1].axpy(w, propagate(d.bk(k), k, tau));
  }

  DuhamelReport rep;
  rep.snapshots = int(traj.size());
  auto consider = [&](const SpectralField& want, const SpectralField& got) {
    SpectralField res = want;
    res -= got;
    auto v = res.values();
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    if (m >= rep.max_residual) {
      rep.max_residual = m;
      rep.residual = std::move(v);
    }
  };
  for (int k = 0; k <= n; ++k) consider(traj.back().ak(k), acc_a[std::size_t(k)]);
  for (int k = 1; k <= n; ++k) consider(traj.back().bk(k), acc_b[std::size_t(k) - 1]);
  return rep;
}

}  // namespace abp
