#include "abp/field.hpp"

#include <string>
#include <utility>

#include "abp/errors.hpp"
#include "abp/kern.hpp"
#include "abp/threads.hpp"

namespace abp {

namespace {

// Discrete projection weight: sum of cos^2(r x_i) over an s-point axis.
double wcos(int r, int s) { return (r == 0 || 2 * r == s) ? double(s) : double(s) / 2; }

// Quadrature norm of the basis function at frequency r on its own axis.
double axis_weight(int r, int h) { return (r == 0 || r == h) ? kTwoPi : kPi; }

// Projection of samples on an (sx, sy) grid onto the (hx, hy) truncation.
// Separable: x-sums against the trig tables first (on a transposed copy so
// they run over contiguous memory), then y-sums. Exact for any sample field
// whose frequencies are resolvable on the sample grid, which is what makes
// the refined-grid product path alias-free for polynomial nonlinearities.
void analysis2(int hx, int hy, const double* v, int sx, int sy, double* out) {
  const std::size_t st = std::size_t(hx + 1) * (hy + 1);
  const AxisTables& tx = axis_tables(sx);
  const AxisTables& ty = axis_tables(sy);

  std::vector<double> vt(std::size_t(sx) * sy);
  for (int i = 0; i < sx; ++i)
    for (int j = 0; j < sy; ++j) vt[std::size_t(j) * sx + i] = v[std::size_t(i) * sy + j];

  std::vector<double> Cx(std::size_t(hx + 1) * sy), Sx(std::size_t(hx + 1) * sy, 0.0);
  parallel_for(std::size_t(hx) + 1, [&](std::size_t pp) {
    int p = int(pp);
    double* crow = Cx.data() + pp * sy;
    for (int j = 0; j < sy; ++j)
      crow[j] = kern::dot(vt.data() + std::size_t(j) * sx, tx.cos_row(p), sx);
    if (p > 0 && p < hx) {
      double* srow = Sx.data() + pp * sy;
      for (int j = 0; j < sy; ++j)
        srow[j] = kern::dot(vt.data() + std::size_t(j) * sx, tx.sin_row(p), sx);
    }
  });

  double* cc = out;
  double* cs = out + st;
  double* sc = out + 2 * st;
  double* ss = out + 3 * st;
  parallel_for(std::size_t(hx) + 1, [&](std::size_t pp) {
    int p = int(pp);
    const double* crow = Cx.data() + pp * sy;
    const double* srow = Sx.data() + pp * sy;
    const double wxc = wcos(p, sx);
    const double wxs = double(sx) / 2;
    for (int q = 0; q <= hy; ++q) {
      std::size_t k = pp * (hy + 1) + q;
      const double wyc = wcos(q, sy);
      const double wys = double(sy) / 2;
      cc[k] = kern::dot(crow, ty.cos_row(q), sy) / (wxc * wyc);
      cs[k] = (q > 0 && q < hy) ? kern::dot(crow, ty.sin_row(q), sy) / (wxc * wys) : 0.0;
      if (p > 0 && p < hx) {
        sc[k] = kern::dot(srow, ty.cos_row(q), sy) / (wxs * wyc);
        ss[k] = (q > 0 && q < hy) ? kern::dot(srow, ty.sin_row(q), sy) / (wxs * wys) : 0.0;
      } else {
        sc[k] = 0.0;
        ss[k] = 0.0;
      }
    }
  });
}

// Evaluation of the packed amplitudes on an (sx, sy) sample grid.
void synthesis2(int hx, int hy, const double* packed, int sx, int sy, double* v) {
  const std::size_t st = std::size_t(hx + 1) * (hy + 1);
  const AxisTables& tx = axis_tables(sx);
  const AxisTables& ty = axis_tables(sy);
  const double* cc = packed;
  const double* cs = packed + st;
  const double* sc = packed + 2 * st;
  const double* ss = packed + 3 * st;

  // U carries the cos(px) profile along y, V the sin(px) profile.
  std::vector<double> U(std::size_t(hx + 1) * sy, 0.0), V(std::size_t(hx + 1) * sy, 0.0);
  parallel_for(std::size_t(hx) + 1, [&](std::size_t pp) {
    int p = int(pp);
    double* urow = U.data() + pp * sy;
    for (int q = 0; q <= hy; ++q) {
      std::size_t k = pp * (hy + 1) + q;
      if (cc[k] != 0.0) kern::axpy(urow, cc[k], ty.cos_row(q), sy);
      if (cs[k] != 0.0) kern::axpy(urow, cs[k], ty.sin_row(q), sy);
    }
    if (p > 0 && p < hx) {
      double* vrow = V.data() + pp * sy;
      for (int q = 0; q <= hy; ++q) {
        std::size_t k = pp * (hy + 1) + q;
        if (sc[k] != 0.0) kern::axpy(vrow, sc[k], ty.cos_row(q), sy);
        if (ss[k] != 0.0) kern::axpy(vrow, ss[k], ty.sin_row(q), sy);
      }
    }
  });
  parallel_for(std::size_t(sx), [&](std::size_t i) {
    double* row = v + i * sy;
    for (int j = 0; j < sy; ++j) row[j] = 0.0;
    for (int p = 0; p <= hx; ++p) {
      double cxi = tx.cos_row(p)[i];
      if (cxi != 0.0) kern::axpy(row, cxi, U.data() + std::size_t(p) * sy, sy);
      if (p > 0 && p < hx) {
        double sxi = tx.sin_row(p)[i];
        if (sxi != 0.0) kern::axpy(row, sxi, V.data() + std::size_t(p) * sy, sy);
      }
    }
  });
}

void analysis1(int h, const double* v, int s, double* out) {
  const AxisTables& t = axis_tables(s);
  for (int p = 0; p <= h; ++p) {
    out[p] = kern::dot(v, t.cos_row(p), s) / wcos(p, s);
    out[(h + 1) + p] =
        (p > 0 && p < h) ? kern::dot(v, t.sin_row(p), s) / (double(s) / 2) : 0.0;
  }
}

void synthesis1(int h, const double* packed, int s, double* v) {
  const AxisTables& t = axis_tables(s);
  for (int i = 0; i < s; ++i) v[i] = 0.0;
  for (int p = 0; p <= h; ++p) {
    if (packed[p] != 0.0) kern::axpy(v, packed[p], t.cos_row(p), s);
    double sp = packed[(h + 1) + p];
    if (sp != 0.0) kern::axpy(v, sp, t.sin_row(p), s);
  }
}

}  // namespace

SpectralField::SpectralField(SpatialGrid g) : g_(g) {
  if (g_.nx < 4) throw ConfigError("field requires a validated grid");
  vals_.assign(g_.npoints(), 0.0);
  coef_.assign(coeff_count(), 0.0);
}

std::size_t SpectralField::coeff_count() const {
  return one_dim() ? 2 * std::size_t(g_.hx() + 1)
                   : 4 * std::size_t(g_.hx() + 1) * (g_.hy() + 1);
}

std::size_t SpectralField::class_stride() const {
  return one_dim() ? std::size_t(g_.hx() + 1) : std::size_t(g_.hx() + 1) * (g_.hy() + 1);
}

std::size_t SpectralField::idx2(int cls, int p, int q) const {
  if (one_dim()) throw ConfigError("2D coefficient accessor on a 1D field");
  return std::size_t(cls) * class_stride() + std::size_t(p) * (g_.hy() + 1) + std::size_t(q);
}

SpectralField SpectralField::from_values(SpatialGrid g, std::vector<double> v) {
  SpectralField f(g);
  if (v.size() != f.value_count())
    throw ConfigError("value count " + std::to_string(v.size()) + " does not match grid (" +
                      std::to_string(f.value_count()) + " nodes)");
  f.vals_ = std::move(v);
  f.coef_ok_ = false;
  return f;
}

SpectralField SpectralField::from_coeffs(SpatialGrid g, std::vector<double> packed) {
  SpectralField f(g);
  if (packed.size() != f.coeff_count())
    throw ConfigError("coefficient shape mismatch with grid: got " +
                      std::to_string(packed.size()) + ", want " +
                      std::to_string(f.coeff_count()));
  f.coef_ = std::move(packed);
  f.vals_ok_ = false;
  return f;
}

SpectralField SpectralField::from_refined_values(SpatialGrid g, const std::vector<double>& v,
                                                 int factor) {
  if (factor < 1) throw ConfigError("refinement factor must be >= 1");
  SpectralField f(g);
  int sx = factor * g.nx;
  if (g.one_dim()) {
    if (v.size() != std::size_t(sx)) throw ConfigError("refined sample count mismatch");
    analysis1(g.hx(), v.data(), sx, f.coef_.data());
  } else {
    int sy = factor * g.ny;
    if (v.size() != std::size_t(sx) * sy) throw ConfigError("refined sample count mismatch");
    analysis2(g.hx(), g.hy(), v.data(), sx, sy, f.coef_.data());
  }
  f.vals_ok_ = false;
  return f;
}

void SpectralField::refresh_values() const {
  vals_.assign(g_.npoints(), 0.0);
  if (one_dim())
    synthesis1(g_.hx(), coef_.data(), g_.nx, vals_.data());
  else
    synthesis2(g_.hx(), g_.hy(), coef_.data(), g_.nx, g_.ny, vals_.data());
  vals_ok_ = true;
}

void SpectralField::refresh_coeffs() const {
  coef_.assign(coeff_count(), 0.0);
  if (one_dim())
    analysis1(g_.hx(), vals_.data(), g_.nx, coef_.data());
  else
    analysis2(g_.hx(), g_.hy(), vals_.data(), g_.nx, g_.ny, coef_.data());
  coef_ok_ = true;
}

const std::vector<double>& SpectralField::values() const {
  if (!vals_ok_) refresh_values();
  return vals_;
}

const std::vector<double>& SpectralField::coeffs() const {
  if (!coef_ok_) refresh_coeffs();
  return coef_;
}

std::vector<double>& SpectralField::values_mut() {
  values();
  coef_ok_ = false;
  return vals_;
}

std::vector<double>& SpectralField::coeffs_mut() {
  coeffs();
  vals_ok_ = false;
  return coef_;
}

double SpectralField::integral() const {
  return mean() * (one_dim() ? kTwoPi : kTwoPi * kTwoPi);
}

double SpectralField::l2sq() const {
  const auto& c = coeffs();
  double acc = 0.0;
  if (one_dim()) {
    int h = g_.hx();
    for (int p = 0; p <= h; ++p) acc += c[p] * c[p] * axis_weight(p, h);
    for (int p = 1; p < h; ++p) {
      double s = c[(h + 1) + p];
      acc += s * s * kPi;
    }
    return acc;
  }
  int hx = g_.hx(), hy = g_.hy();
  std::size_t st = class_stride();
  for (int cls = 0; cls < 4; ++cls)
    for (int p = 0; p <= hx; ++p) {
      double wx = axis_weight(p, hx);
      const double* row = c.data() + cls * st + std::size_t(p) * (hy + 1);
      for (int q = 0; q <= hy; ++q) acc += row[q] * row[q] * wx * axis_weight(q, hy);
    }
  return acc;
}

SpectralField SpectralField::dx() const {
  const auto& in = coeffs();
  std::vector<double> out(in.size(), 0.0);
  if (one_dim()) {
    int h = g_.hx();
    for (int p = 1; p <= h; ++p) {
      out[p] = double(p) * in[(h + 1) + p];
      if (p < h) out[(h + 1) + p] = -double(p) * in[p];
    }
  } else {
    int hx = g_.hx(), hy = g_.hy();
    std::size_t st = class_stride();
    const double* icc = in.data();
    const double* ics = in.data() + st;
    const double* isc = in.data() + 2 * st;
    const double* iss = in.data() + 3 * st;
    for (int p = 1; p <= hx; ++p)
      for (int q = 0; q <= hy; ++q) {
        std::size_t k = std::size_t(p) * (hy + 1) + q;
        out[k] = double(p) * isc[k];
        out[st + k] = double(p) * iss[k];
        if (p < hx) {
          out[2 * st + k] = -double(p) * icc[k];
          out[3 * st + k] = -double(p) * ics[k];
        }
      }
  }
  return from_coeffs(g_, std::move(out));
}

SpectralField SpectralField::dy() const {
  if (one_dim()) throw ConfigError("dy on a 1D field");
  const auto& in = coeffs();
  std::vector<double> out(in.size(), 0.0);
  int hx = g_.hx(), hy = g_.hy();
  std::size_t st = class_stride();
  const double* icc = in.data();
  const double* ics = in.data() + st;
  const double* isc = in.data() + 2 * st;
  const double* iss = in.data() + 3 * st;
  for (int p = 0; p <= hx; ++p)
    for (int q = 1; q <= hy; ++q) {
      std::size_t k = std::size_t(p) * (hy + 1) + q;
      out[k] = double(q) * ics[k];
      out[2 * st + k] = double(q) * iss[k];
      if (q < hy) {
        out[st + k] = -double(q) * icc[k];
        out[3 * st + k] = -double(q) * isc[k];
      }
    }
  return from_coeffs(g_, std::move(out));
}

SpectralField SpectralField::laplacian() const {
  const auto& in = coeffs();
  std::vector<double> out(in.size());
  if (one_dim()) {
    int h = g_.hx();
    for (int p = 0; p <= h; ++p) {
      double m = -double(p) * double(p);
      out[p] = m * in[p];
      out[(h + 1) + p] = m * in[(h + 1) + p];
    }
  } else {
    int hx = g_.hx(), hy = g_.hy();
    std::size_t st = class_stride();
    for (int p = 0; p <= hx; ++p)
      for (int q = 0; q <= hy; ++q) {
        std::size_t k = std::size_t(p) * (hy + 1) + q;
        double m = -(double(p) * p + double(q) * q);
        for (int cls = 0; cls < 4; ++cls) out[cls * st + k] = m * in[cls * st + k];
      }
  }
  return from_coeffs(g_, std::move(out));
}

std::vector<double> SpectralField::values_refined(int factor) const {
  if (factor < 1) throw ConfigError("refinement factor must be >= 1");
  const auto& c = coeffs();
  if (one_dim()) {
    std::vector<double> v(std::size_t(factor) * g_.nx);
    synthesis1(g_.hx(), c.data(), factor * g_.nx, v.data());
    return v;
  }
  std::vector<double> v(std::size_t(factor) * g_.nx * std::size_t(factor) * g_.ny);
  synthesis2(g_.hx(), g_.hy(), c.data(), factor * g_.nx, factor * g_.ny, v.data());
  return v;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) { return axpy(1.0, o); }

SpectralField& SpectralField::operator-=(const SpectralField& o) { return axpy(-1.0, o); }

SpectralField& SpectralField::operator*=(double s) {
  auto& c = coeffs_mut();
  for (double& x : c) x *= s;
  return *this;
}

SpectralField& SpectralField::axpy(double a, const SpectralField& x) {
  if (!(g_ == x.g_)) throw ConfigError("field shape mismatch");
  auto& c = coeffs_mut();
  const auto& xc = x.coeffs();
  kern::axpy(c.data(), a, xc.data(), c.size());
  return *this;
}

std::vector<double> forward_transform(const SpatialGrid& g, const std::vector<double>& values) {
  return SpectralField::from_values(g, values).coeffs();
}

std::vector<double> inverse_transform(const SpatialGrid& g, const std::vector<double>& packed) {
  return SpectralField::from_coeffs(g, packed).values();
}

double angular_quadrature(std::span<const double> values) {
  if (values.size() < 2) throw ConfigError("angular quadrature needs at least 2 nodes");
  return kern::sum(values.data(), values.size()) * (kTwoPi / double(values.size()));
}

double angular_quadrature(std::span<const double> values, std::span<const double> weights) {
  if (values.size() < 2) throw ConfigError("angular quadrature needs at least 2 nodes");
  if (values.size() != weights.size())
    throw ConfigError("quadrature weights do not match node count");
  return kern::dot(values.data(), weights.data(), values.size());
}

}  // namespace abp
