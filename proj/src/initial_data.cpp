#include "abp/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <istream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "abp/errors.hpp"

namespace abp {

namespace {

constexpr double kBoxTol = 1e-12;

// exp(-1/(1-r^2)) glued to zero outside the unit ball; flat to all orders
// across r = 1.
double raw_profile(double r2) {
  if (r2 >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - r2));
}

double gamma_raw(double theta) {
  const double s = (theta - kPi) / kPi;
  return raw_profile(s * s);
}

double beta_raw(double x, double y) {
  const double u = (x - kPi) / kPi;
  const double v = (y - kPi) / kPi;
  return raw_profile(u * u + v * v);
}

// Node counts for the cached normalizations and the multiplier transforms.
// The profiles are smooth and periodic, so the trapezoid rule converges
// faster than any power of the step; 512 angular nodes and 256 per spatial
// axis already measure at ~1e-14, and these sizes leave margin.
constexpr int kThetaNodes = 2048;
constexpr int kAxisNodes = 512;

double gamma_raw_mass() {
  static const double m = [] {
    long double acc = 0.0L;
    for (int i = 0; i < kThetaNodes; ++i)
      acc += gamma_raw(kTwoPi * double(i) / kThetaNodes);
    return double(acc * kTwoPi / kThetaNodes);
  }();
  return m;
}

double beta_raw_mass() {
  static const double m = [] {
    long double acc = 0.0L;
    for (int i = 0; i < kAxisNodes; ++i) {
      const double x = kTwoPi * double(i) / kAxisNodes;
      for (int j = 0; j < kAxisNodes; ++j)
        acc += beta_raw(x, kTwoPi * double(j) / kAxisNodes);
    }
    const double h = kTwoPi / kAxisNodes;
    return double(acc) * h * h;
  }();
  return m;
}

// Angular multiplier pair of gamma_eps. Substituting sigma = s/eps^alpha,
//   C_k = int gamma_eps(s) cos(ks) ds = int gamma(sigma) cos(k w sigma) dsigma
// with w = eps^alpha, likewise S_k with sin, both divided by the quadrature
// mass of gamma. Dividing by the same-order sum makes C_0 exactly one and
// S_0 exactly zero, so the zero mode (and with it the total mass) is
// preserved bit for bit.
void angular_multipliers(double w, int n, std::vector<double>& C, std::vector<double>& S) {
  const std::size_t m = std::size_t(n) + 1;
  const std::size_t nodes = std::size_t(kThetaNodes);
  C.assign(m, 0.0);
  S.assign(m, 0.0);
  std::vector<double> gv(nodes);
  for (int i = 0; i < kThetaNodes; ++i)
    gv[std::size_t(i)] = gamma_raw(kTwoPi * double(i) / kThetaNodes);
  for (int k = 0; k <= n; ++k) {
    long double c = 0.0L, s = 0.0L, mass = 0.0L;
    for (int i = 0; i < kThetaNodes; ++i) {
      const double ph = double(k) * w * (kTwoPi * double(i) / kThetaNodes);
      c += gv[std::size_t(i)] * std::cos(ph);
      s += gv[std::size_t(i)] * std::sin(ph);
      mass += gv[std::size_t(i)];
    }
    C[std::size_t(k)] = double(c / mass);
    S[std::size_t(k)] = double(s / mass);
  }
}

// Even part of the spatial transform of beta_eps about its center:
//   D(p,q) = int beta(xi) cos(eps p (xi1 - pi)) cos(eps q (xi2 - pi)) dxi,
// normalized by D(0,0). The odd parts vanish by the radial symmetry of the
// profile; what remains of the transform is the translation by the center
// (pi eps, pi eps), applied afterwards as coefficient rotations.
std::vector<double> spatial_multipliers(double eps, int hx, int hy) {
  const std::size_t na = std::size_t(kAxisNodes);
  std::vector<double> bump(na * na);
  for (std::size_t i = 0; i < na; ++i) {
    const double x = kTwoPi * double(i) / kAxisNodes;
    for (std::size_t j = 0; j < na; ++j)
      bump[i * na + j] = beta_raw(x, kTwoPi * double(j) / kAxisNodes);
  }
  const std::size_t mx = std::size_t(hx) + 1, my = std::size_t(hy) + 1;
  // inner[i][q] = sum_j bump(i,j) cos(eps q (xi_j - pi))
  std::vector<double> inner(na * my, 0.0);
  for (std::size_t i = 0; i < na; ++i)
    for (int q = 0; q < int(my); ++q) {
      long double acc = 0.0L;
      for (std::size_t j = 0; j < na; ++j) {
        const double xi = kTwoPi * double(j) / kAxisNodes;
        acc += bump[i * na + j] * std::cos(eps * double(q) * (xi - kPi));
      }
      inner[i * my + std::size_t(q)] = double(acc);
    }
  std::vector<double> D(mx * my);
  for (int p = 0; p < int(mx); ++p)
    for (int q = 0; q < int(my); ++q) {
      long double acc = 0.0L;
      for (std::size_t i = 0; i < na; ++i) {
        const double xi = kTwoPi * double(i) / kAxisNodes;
        acc += std::cos(eps * double(p) * (xi - kPi)) * inner[i * my + std::size_t(q)];
      }
      D[std::size_t(p) * my + std::size_t(q)] = double(acc);
    }
  const double d0 = D[0];
  for (double& v : D) v /= d0;
  return D;
}

// Apply the spatial mollifier to one coefficient field: scale every class
// by the even multiplier, then translate by the bump center c per axis via
// rotations of the (cos, sin) coefficient pairs. The sine partner at the
// Nyquist frequency is a structural zero, so the rotation there degenerates
// to the cosine projection.
SpectralField mollify_field(const SpectralField& f, const std::vector<double>& D, double c) {
  const SpatialGrid g = f.grid();
  const int hx = g.hx(), hy = g.hy();
  const std::size_t my = std::size_t(hy) + 1;
  const std::size_t stride = f.class_stride();
  std::vector<double> packed = f.coeffs();
  auto at = [&](int cls, int p, int q) -> double& {
    return packed[std::size_t(cls) * stride + std::size_t(p) * my + std::size_t(q)];
  };

  for (int cls = 0; cls < 4; ++cls)
    for (int p = 0; p <= hx; ++p)
      for (int q = 0; q <= hy; ++q)
        at(cls, p, q) *= D[std::size_t(p) * my + std::size_t(q)];

  for (int p = 1; p <= hx; ++p) {
    const double co = std::cos(double(p) * c), si = std::sin(double(p) * c);
    for (int q = 0; q <= hy; ++q) {
      if (p == hx) {
        at(0, p, q) *= co;
        at(1, p, q) *= co;
        continue;
      }
      const double cc = at(0, p, q), sc = at(2, p, q);
      at(0, p, q) = cc * co - sc * si;
      at(2, p, q) = cc * si + sc * co;
      const double cs = at(1, p, q), ss = at(3, p, q);
      at(1, p, q) = cs * co - ss * si;
      at(3, p, q) = cs * si + ss * co;
    }
  }
  for (int q = 1; q <= hy; ++q) {
    const double co = std::cos(double(q) * c), si = std::sin(double(q) * c);
    for (int p = 0; p <= hx; ++p) {
      if (q == hy) {
        at(0, p, q) *= co;
        at(2, p, q) *= co;
        continue;
      }
      const double cc = at(0, p, q), cs = at(1, p, q);
      at(0, p, q) = cc * co - cs * si;
      at(1, p, q) = cc * si + cs * co;
      const double sc = at(2, p, q), ss = at(3, p, q);
      at(2, p, q) = sc * co - ss * si;
      at(3, p, q) = sc * si + ss * co;
    }
  }
  return SpectralField::from_coeffs(g, std::move(packed));
}

SpectralField field_of(SpatialGrid g, double (*fn)(double, double)) {
  std::vector<double> v(g.npoints());
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      v[std::size_t(i) * std::size_t(g.ny) + std::size_t(j)] = fn(g.x(i), g.y(j));
  return SpectralField::from_values(g, std::move(v));
}

SpectralField constant_field(SpatialGrid g, double v) {
  return SpectralField::from_values(g, std::vector<double>(g.npoints(), v));
}

double parse_double(const std::string& token, long row) {
  double v = 0.0;
  const char* b = token.data();
  const char* e = b + token.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e)
    throw ConfigError("initial data csv: bad number '" + token + "' in row " +
                      std::to_string(row));
  return v;
}

// Snap a coordinate to its rank on the uniform lattice {2 pi r / count}.
int lattice_rank(double v, int count, const char* axis, long row) {
  const double step = kTwoPi / double(count);
  const long r = std::lround(v / step);
  if (r < 0 || r >= count || std::abs(v - double(r) * step) > 1e-9)
    throw ConfigError(std::string("initial data csv: ") + axis + " value " +
                      std::to_string(v) + " in row " + std::to_string(row) +
                      " is off the uniform lattice");
  return int(r);
}

}  // namespace

void MollifierSpec::validate() const {
  if (!(epsilon > 0.0) || !(epsilon <= 1.0) || !std::isfinite(epsilon))
    throw ConfigError("mollifier: epsilon must lie in (0, 1], got " +
                      std::to_string(epsilon));
  if (!(alpha > 2.0) || !std::isfinite(alpha))
    throw ConfigError("mollifier: alpha must exceed 2, got " + std::to_string(alpha));
}

double bump_gamma(double theta) { return gamma_raw(theta) / gamma_raw_mass(); }

double bump_beta(double x, double y) { return beta_raw(x, y) / beta_raw_mass(); }

std::vector<Violation> validate(const InitialSpec& spec) {
  std::vector<Violation> out;
  const double lo = -kBoxTol, hi = 1.0 + kBoxTol;

  switch (spec.kind) {
    case InitialSpec::Kind::Samples: {
      const std::size_t npts = spec.grid.npoints();
      const std::size_t m = std::size_t(spec.ntheta);
      if (spec.ntheta < 1 || spec.samples.size() != npts * m) {
        out.push_back({"shape", long(spec.samples.size()), double(spec.ntheta)});
        return out;
      }
      for (std::size_t i = 0; i < npts; ++i) {
        double worst = 0.0;
        long double q = 0.0L;
        for (std::size_t t = 0; t < m; ++t) {
          const double v = spec.samples[i * m + t];
          q += v;
          worst = std::min(worst, v);
        }
        if (worst < lo) out.push_back({"f0", long(i), worst});
        const double rho = double(q) * kTwoPi / double(m);
        if (rho < lo || rho > hi) out.push_back({"rho0", long(i), rho});
      }
      return out;
    }

    case InitialSpec::Kind::Modes: {
      if (spec.modes.a.empty()) {
        out.push_back({"shape", 0, 0.0});
        return out;
      }
      const int n = spec.modes.n_modes();
      const std::size_t npts = spec.modes.a[0].grid().npoints();
      const int m = std::max(2 * n + 2, 64);
      std::vector<double> fmin(npts, std::numeric_limits<double>::infinity());
      for (int t = 0; t < m; ++t) {
        const std::vector<double> vals = spec.modes.reconstruct_at(kTwoPi * double(t) / m);
        for (std::size_t i = 0; i < npts; ++i) fmin[i] = std::min(fmin[i], vals[i]);
      }
      for (std::size_t i = 0; i < npts; ++i)
        if (fmin[i] < lo) out.push_back({"f0", long(i), fmin[i]});
      const std::vector<double>& rho = spec.modes.a[0].values();
      for (std::size_t i = 0; i < npts; ++i)
        if (rho[i] < lo || rho[i] > hi) out.push_back({"rho0", long(i), rho[i]});
      return out;
    }

    case InitialSpec::Kind::Dirac: {
      if (spec.h0.grid().npoints() == 0) {
        out.push_back({"shape", 0, 0.0});
        return out;
      }
      const std::vector<double>& h = spec.h0.values();
      for (std::size_t i = 0; i < h.size(); ++i)
        if (h[i] < lo || h[i] > hi) out.push_back({"h0", long(i), h[i]});
      return out;
    }
  }
  out.push_back({"shape", 0, 0.0});
  return out;
}

AngularState project_f0(const SpatialGrid& g, const std::vector<double>& samples,
                        int ntheta, int n) {
  if (n < 1) throw ConfigError("project_f0: angular truncation must be >= 1");
  if (ntheta < 2 * n + 2)
    throw ConfigError("project_f0: need at least 2n+2 = " + std::to_string(2 * n + 2) +
                      " theta nodes, got " + std::to_string(ntheta));
  const std::size_t npts = g.npoints();
  const std::size_t m = std::size_t(ntheta);
  if (samples.size() != npts * m)
    throw ConfigError("project_f0: sample count " + std::to_string(samples.size()) +
                      " does not match the grid x theta lattice");

  AngularState out(g, n);
  const double h = kTwoPi / double(ntheta);
  std::vector<double> wc(m), ws(m), field(npts);
  for (int k = 0; k <= n; ++k) {
    for (std::size_t t = 0; t < m; ++t) {
      wc[t] = std::cos(double(k) * double(t) * h) * h;
      ws[t] = std::sin(double(k) * double(t) * h) * h;
    }
    for (std::size_t i = 0; i < npts; ++i)
      field[i] = angular_quadrature({samples.data() + i * m, m}, wc);
    out.ak(k) = SpectralField::from_values(g, field);
    if (k >= 1) {
      for (std::size_t i = 0; i < npts; ++i)
        field[i] = angular_quadrature({samples.data() + i * m, m}, ws);
      out.bk(k) = SpectralField::from_values(g, field);
    }
  }
  return out;
}

AngularState dirac_in_angle(const SpectralField& h0, double theta_star, int n) {
  if (n < 1) throw ConfigError("dirac_in_angle: angular truncation must be >= 1");
  const SpatialGrid g = h0.grid();
  AngularState out(g, n);
  out.a[0] = h0;
  for (int k = 1; k <= n; ++k) {
    SpectralField ca = h0;
    ca *= std::cos(double(k) * theta_star);
    SpectralField cb = h0;
    cb *= std::sin(double(k) * theta_star);
    out.ak(k) = std::move(ca);
    out.bk(k) = std::move(cb);
  }
  return out;
}

AngularState materialize(const InitialSpec& spec, int n) {
  if (n < 1) throw ConfigError("materialize: angular truncation must be >= 1");
  switch (spec.kind) {
    case InitialSpec::Kind::Samples:
      return project_f0(spec.grid, spec.samples, spec.ntheta, n);
    case InitialSpec::Kind::Dirac:
      return dirac_in_angle(spec.h0, spec.theta_star, n);
    case InitialSpec::Kind::Modes: {
      if (spec.modes.a.empty()) throw ConfigError("materialize: empty mode list");
      const int m = spec.modes.n_modes();
      if (m == n) return spec.modes;
      AngularState out(spec.modes.a[0].grid(), n);
      out.time = spec.modes.time;
      for (int k = 0; k <= std::min(m, n); ++k) {
        out.ak(k) = spec.modes.ak(k);
        if (k >= 1) out.bk(k) = spec.modes.bk(k);
      }
      return out;
    }
  }
  throw ConfigError("materialize: unknown data kind");
}

AngularState mollify(const AngularState& modes, const MollifierSpec& spec) {
  spec.validate();
  if (modes.a.empty()) throw ConfigError("mollify: empty mode list");
  const SpatialGrid g = modes.a[0].grid();
  if (g.one_dim()) throw ConfigError("mollify: spatial mollifier needs the 2D domain");
  const int n = modes.n_modes();

  std::vector<double> C, S;
  angular_multipliers(std::pow(spec.epsilon, spec.alpha), n, C, S);
  const std::vector<double> D = spatial_multipliers(spec.epsilon, g.hx(), g.hy());
  const double center = kPi * spec.epsilon;

  AngularState out(g, n);
  out.time = modes.time;
  out.a[0] = mollify_field(modes.a[0], D, center);
  for (int k = 1; k <= n; ++k) {
    SpectralField na = modes.ak(k);
    na *= C[std::size_t(k)];
    na.axpy(-S[std::size_t(k)], modes.bk(k));
    SpectralField nb = modes.bk(k);
    nb *= C[std::size_t(k)];
    nb.axpy(S[std::size_t(k)], modes.ak(k));
    out.ak(k) = mollify_field(na, D, center);
    out.bk(k) = mollify_field(nb, D, center);
  }
  return out;
}

AngularState mollify(const InitialSpec& data, const MollifierSpec& spec, int n) {
  if (data.kind == InitialSpec::Kind::Samples)
    throw ConfigError("mollify: expects mode-list or dirac data");
  return mollify(materialize(data, n), spec);
}

InitialSpec preset(const std::string& name, SpatialGrid g, double mass, double theta_star) {
  if (g.one_dim()) throw ConfigError("preset '" + name + "' needs a 2D grid");
  InitialSpec spec;
  spec.grid = g;
  spec.target_mass = mass;
  spec.kind = InitialSpec::Kind::Modes;

  if (name == "isotropic-uniform") {
    AngularState s(g, 1);
    s.a[0] = constant_field(g, mass);
    spec.modes = std::move(s);
    return spec;
  }
  if (name == "one-mode-perturbation") {
    AngularState s(g, 1);
    s.a[0] = field_of(g, [](double x, double) { return 0.2 * std::cos(x); });
    s.a[0] += constant_field(g, mass);
    s.ak(1) = field_of(g, [](double, double y) { return 0.1 * std::sin(y); });
    spec.modes = std::move(s);
    return spec;
  }
  if (name == "banded-density") {
    AngularState s(g, 1);
    s.a[0] = field_of(g, [](double, double y) { return 0.3 * std::cos(y); });
    s.a[0] += constant_field(g, mass);
    spec.modes = std::move(s);
    return spec;
  }
  if (name == "polarized-stripe") {
    AngularState s(g, 1);
    s.a[0] = constant_field(g, mass);
    s.ak(1) = field_of(g, [](double x, double) { return 0.12 * std::cos(x); });
    s.bk(1) = field_of(g, [](double x, double) { return 0.12 * std::sin(x); });
    spec.modes = std::move(s);
    return spec;
  }
  if (name == "mixed-modes") {
    AngularState s(g, 2);
    s.a[0] = field_of(g, [](double x, double y) { return 0.1 * std::cos(x) + 0.1 * std::sin(y); });
    s.a[0] += constant_field(g, mass);
    s.ak(1) = field_of(g, [](double, double y) { return 0.04 * std::cos(y); });
    s.bk(1) = field_of(g, [](double x, double) { return 0.03 * std::sin(x); });
    s.ak(2) = field_of(g, [](double x, double) { return 0.025 * std::cos(x); });
    s.bk(2) = field_of(g, [](double x, double y) { return 0.02 * std::sin(x + y); });
    spec.modes = std::move(s);
    return spec;
  }
  if (name == "aligned-dirac") {
    spec.kind = InitialSpec::Kind::Dirac;
    spec.h0 = field_of(g, [](double x, double y) { return 0.2 * std::cos(x) * std::cos(y); });
    SpectralField base = constant_field(g, mass);
    spec.h0 += base;
    spec.theta_star = theta_star;
    return spec;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
  return {"isotropic-uniform", "one-mode-perturbation", "banded-density",
          "polarized-stripe",  "mixed-modes",           "aligned-dirac"};
}

GtState gt_preset(const std::string& name, SpatialGrid g, double mass) {
  if (!g.one_dim()) throw ConfigError("gt preset needs a 1D grid");
  GtState s(g);
  auto fill = [&](double (*fn)(double)) {
    std::vector<double> v(g.npoints());
    for (int i = 0; i < g.nx; ++i) v[std::size_t(i)] = fn(g.x(i));
    return SpectralField::from_values(g, std::move(v));
  };
  if (name == "gt-uniform") {
    s.fR = SpectralField::from_values(g, std::vector<double>(g.npoints(), mass / 2));
    s.fL = s.fR;
    return s;
  }
  if (name == "gt-pulse") {
    SpectralField half = fill([](double x) { return 0.2 * std::cos(x); });
    half *= mass;
    SpectralField base = SpectralField::from_values(g, std::vector<double>(g.npoints(), mass / 2));
    half += base;
    s.fR = half;
    s.fL = std::move(half);
    return s;
  }
  if (name == "gt-counterflow") {
    SpectralField base = SpectralField::from_values(g, std::vector<double>(g.npoints(), mass / 2));
    SpectralField wave = fill([](double x) { return 0.1 * std::cos(x); });
    s.fR = base;
    s.fR += wave;
    s.fL = std::move(base);
    s.fL -= wave;
    return s;
  }
  throw ConfigError("unknown gt preset '" + name + "'");
}

std::vector<std::string> gt_preset_names() {
  return {"gt-uniform", "gt-pulse", "gt-counterflow"};
}

InitialSpec load_initial_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("initial data csv: empty stream");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,y,theta,f")
    throw ConfigError("initial data csv: expected header 'x,y,theta,f', got '" + line + "'");

  struct Row {
    double x, y, th, f;
  };
  std::vector<Row> rows;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double vals[4];
    std::size_t pos = 0;
    for (int c = 0; c < 4; ++c) {
      const std::size_t next = (c == 3) ? line.size() : line.find(',', pos);
      if (next == std::string::npos)
        throw ConfigError("initial data csv: row " + std::to_string(lineno) +
                          " has fewer than 4 columns");
      vals[c] = parse_double(line.substr(pos, next - pos), lineno);
      pos = next + 1;
    }
    rows.push_back({vals[0], vals[1], vals[2], vals[3]});
  }
  if (rows.empty()) throw ConfigError("initial data csv: no data rows");

  auto count_unique = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return int(v.size());
  };
  std::vector<double> xs, ys, ths;
  xs.reserve(rows.size());
  ys.reserve(rows.size());
  ths.reserve(rows.size());
  for (const Row& r : rows) {
    xs.push_back(r.x);
    ys.push_back(r.y);
    ths.push_back(r.th);
  }
  const int nx = count_unique(std::move(xs));
  const int ny = count_unique(std::move(ys));
  const int ntheta = count_unique(std::move(ths));

  InitialSpec spec;
  spec.kind = InitialSpec::Kind::Samples;
  spec.grid = SpatialGrid(nx, ny);
  spec.ntheta = ntheta;
  spec.samples.assign(spec.grid.npoints() * std::size_t(ntheta),
                      std::numeric_limits<double>::quiet_NaN());
  long rowno = 1;
  for (const Row& r : rows) {
    ++rowno;
    const int i = lattice_rank(r.x, nx, "x", rowno);
    const int j = lattice_rank(r.y, ny, "y", rowno);
    const int t = lattice_rank(r.th, ntheta, "theta", rowno);
    double& slot =
        spec.samples[(std::size_t(i) * std::size_t(ny) + std::size_t(j)) * std::size_t(ntheta) +
                     std::size_t(t)];
    if (!std::isnan(slot))
      throw ConfigError("initial data csv: duplicate node in row " + std::to_string(rowno));
    slot = r.f;
  }
  for (std::size_t i = 0; i < spec.samples.size(); ++i)
    if (std::isnan(spec.samples[i]))
      throw ConfigError("initial data csv: tensor grid is incomplete (missing node " +
                        std::to_string(i) + ")");
  return spec;
}

}  // namespace abp
