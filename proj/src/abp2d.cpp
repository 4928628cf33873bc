#include "abp/abp2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "abp/errors.hpp"
#include "abp/kern.hpp"
#include "abp/threads.hpp"

namespace abp {

void AbpParams::validate() const {
  if (!(De > 0.0 && De <= 1.0))
    throw ConfigError("De must lie in (0,1], got " + std::to_string(De));
  if (n < 1) throw ConfigError("angular truncation n must be >= 1, got " + std::to_string(n));
  if (!(Pe >= 0.0)) throw ConfigError("Pe must be nonnegative, got " + std::to_string(Pe));
  if (grid.one_dim() || grid.nx < 4) throw ConfigError("2D model requires a 2D grid");
  if (!(phi_mass >= 0.0 && phi_mass < 1.0))
    throw ConfigError("phi_mass must lie in [0,1), got " + std::to_string(phi_mass));
}

AngularState::AngularState(SpatialGrid g, int n) {
  if (n < 1) throw ConfigError("angular truncation n must be >= 1");
  a.reserve(std::size_t(n) + 1);
  b.reserve(std::size_t(n));
  for (int k = 0; k <= n; ++k) a.emplace_back(g);
  for (int k = 1; k <= n; ++k) b.emplace_back(g);
}

std::vector<double> AngularState::reconstruct_at(double theta) const {
  const auto& base = a[0].values();
  std::vector<double> out(base.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = base[i] / kTwoPi;
  for (int k = 1; k <= n_modes(); ++k) {
    kern::axpy(out.data(), std::cos(k * theta) / kPi, ak(k).values().data(), out.size());
    kern::axpy(out.data(), std::sin(k * theta) / kPi, bk(k).values().data(), out.size());
  }
  return out;
}

double AngularState::min_over_theta(int ntheta) const {
  if (ntheta < 1) throw ConfigError("min_over_theta needs at least one angle");
  double m = std::numeric_limits<double>::infinity();
  for (int j = 0; j < ntheta; ++j) {
    auto slice = reconstruct_at(kTwoPi * double(j) / double(ntheta));
    for (double v : slice) m = std::min(m, v);
  }
  return m;
}

SpectralField mobility(const SpectralField& rho) {
  const auto& v = rho.values();
  std::vector<double> m(v.size());
  kern::mobility(m.data(), v.data(), v.size());
  return SpectralField::from_values(rho.grid(), std::move(m));
}

std::vector<double> refined_mobility_values(const SpectralField& rho, long* clip_count) {
  auto rv = rho.values_refined(2);
  std::vector<double> m(rv.size());
  kern::mobility(m.data(), rv.data(), rv.size());
  if (clip_count) {
    long c = 0;
    for (double v : rv)
      if (v < 0.0 || v > 1.0) ++c;
    *clip_count = c;
  }
  return m;
}

SpectralField truncated_product(const SpectralField& f, const std::vector<double>& refined_vals) {
  auto fv = f.values_refined(2);
  if (fv.size() != refined_vals.size())
    throw ConfigError("refined multiplier does not match the field's 2x grid");
  std::vector<double> prod(fv.size());
  kern::mul(prod.data(), fv.data(), refined_vals.data(), fv.size());
  return SpectralField::from_refined_values(f.grid(), prod, 2);
}

ModeVelocity velocities(const AngularState& s, int k) {
  int n = s.n_modes();
  if (n < 1) throw ConfigError("state carries no angular modes");
  if (k < 0 || k > n)
    throw std::out_of_range("velocity mode " + std::to_string(k) + " exceeds truncation " +
                            std::to_string(n));
  SpatialGrid g = s.a[0].grid();
  ModeVelocity v{SpectralField(g), SpectralField(g), SpectralField(g), SpectralField(g)};
  if (k == 0) {
    v.jx = s.ak(1);
    v.jy = s.bk(1);
    return v;  // Q_0 unused, left zero
  }
  if (k == 1) {
    // first row couples back to the density with weight 2 (the 1/(2pi)
    // normalization of a0); a2, b2 drop out below truncation n = 1
    v.jx = s.ak(0);
    v.jx *= 2.0;
    v.qy = v.jx;
    if (n >= 2) {
      v.jx += s.ak(2);
      v.jy = s.bk(2);
      v.qx = s.bk(2);
      v.qy -= s.ak(2);
    }
    return v;
  }
  if (k == n) {
    v.jx = s.ak(n - 1);
    v.jy = s.bk(n - 1);
    v.jy *= -1.0;
    v.qx = s.bk(n - 1);
    v.qy = s.ak(n - 1);
    return v;
  }
  v.jx = s.ak(k + 1);
  v.jx += s.ak(k - 1);
  v.jy = s.bk(k + 1);
  v.jy -= s.bk(k - 1);
  v.qx = s.bk(k + 1);
  v.qx += s.bk(k - 1);
  v.qy = s.ak(k - 1);
  v.qy -= s.ak(k + 1);
  return v;
}

double linear_symbol(const AbpParams& par, int k, int p, int q) {
  return par.De * (double(p) * p + double(q) * q) + double(k) * k;
}

namespace {

void scan_finite(const SpectralField& f, const std::string& label) {
  const auto& c = f.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!std::isfinite(c[i])) throw NumericError("non-finite coefficient", label, long(i));
}

AngularState rhs_impl(const AngularState& s, const AbpParams& par, bool with_linear) {
  par.validate();
  int n = s.n_modes();
  if (n != par.n)
    throw ConfigError("state has " + std::to_string(n) + " modes, params expect " +
                      std::to_string(par.n));
  for (int k = 0; k <= n; ++k) {
    if (!(s.ak(k).grid() == par.grid)) throw ConfigError("mode grids do not match params");
    scan_finite(s.ak(k), "a_" + std::to_string(k));
    if (k >= 1) {
      if (!(s.bk(k).grid() == par.grid)) throw ConfigError("mode grids do not match params");
      scan_finite(s.bk(k), "b_" + std::to_string(k));
    }
  }

  auto mref = refined_mobility_values(s.a[0]);
  AngularState out(par.grid, n);
  out.time = s.time;

  // One task per mode index; the shared mobility table is read-only here.
  parallel_for(std::size_t(n) + 1, [&](std::size_t kk) {
    int k = int(kk);
    ModeVelocity vel = velocities(s, k);
    double fac = (k == 0) ? par.Pe : par.Pe / 2.0;

    SpectralField da = truncated_product(vel.jx, mref).dx();
    da += truncated_product(vel.jy, mref).dy();
    da *= -fac;
    if (with_linear) {
      da.axpy(par.De, s.ak(k).laplacian());
      if (k >= 1) da.axpy(-double(k) * k, s.ak(k));
    }
    out.ak(k) = std::move(da);

    if (k >= 1) {
      SpectralField db = truncated_product(vel.qx, mref).dx();
      db += truncated_product(vel.qy, mref).dy();
      db *= -fac;
      if (with_linear) {
        db.axpy(par.De, s.bk(k).laplacian());
        db.axpy(-double(k) * k, s.bk(k));
      }
      out.bk(k) = std::move(db);
    }
  });
  return out;
}

}  // namespace

AngularState rhs(const AngularState& s, const AbpParams& par) { return rhs_impl(s, par, true); }

AngularState drift_rhs(const AngularState& s, const AbpParams& par) {
  return rhs_impl(s, par, false);
}

}  // namespace abp
