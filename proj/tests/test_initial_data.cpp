#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "abp/diagnostics.hpp"
#include "abp/errors.hpp"
#include "abp/initial_data.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace abp;

namespace {

template <class Fn>
SpectralField fill2(SpatialGrid g, Fn&& fn) {
  std::vector<double> v(g.npoints());
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) v[std::size_t(i) * g.ny + j] = fn(g.x(i), g.y(j));
  return SpectralField::from_values(g, std::move(v));
}

SpectralField constant(SpatialGrid g, double c) {
  return SpectralField::from_values(g, std::vector<double>(g.npoints(), c));
}

double max_coeff_diff(const SpectralField& u, const SpectralField& v) {
  const std::vector<double>& a = u.coeffs();
  const std::vector<double>& b = v.coeffs();
  REQUIRE(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs_coeff(const SpectralField& u) {
  double m = 0.0;
  for (double c : u.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

double state_diff(const AngularState& u, const AngularState& v) {
  REQUIRE(u.n_modes() == v.n_modes());
  double m = 0.0;
  for (int k = 0; k <= u.n_modes(); ++k) {
    m = std::max(m, max_coeff_diff(u.ak(k), v.ak(k)));
    if (k >= 1) m = std::max(m, max_coeff_diff(u.bk(k), v.bk(k)));
  }
  return m;
}

// Shift f in angle by beta: the (a_k, b_k) pair rotates by k*beta.
AngularState rotate_angle(const AngularState& s, double beta) {
  AngularState out = s;
  for (int k = 1; k <= s.n_modes(); ++k) {
    const double c = std::cos(k * beta), si = std::sin(k * beta);
    SpectralField na = s.ak(k);
    na *= c;
    na.axpy(si, s.bk(k));
    SpectralField nb = s.bk(k);
    nb *= c;
    nb.axpy(-si, s.ak(k));
    out.ak(k) = std::move(na);
    out.bk(k) = std::move(nb);
  }
  return out;
}

// Direct quadrature of the angular convolution (gamma_eps * f)(theta) for
// spatially uniform mode amplitudes. Substituting sigma = s/eps^alpha turns
// the scaled kernel into the raw profile:
//   int gamma(sigma) f(theta - w sigma) dsigma / int gamma,   w = eps^alpha.
double convolve_angle_ref(const std::vector<double>& am, const std::vector<double>& bm,
                          double w, double theta) {
  const int N = 4096;
  long double num = 0.0L, den = 0.0L;
  for (int i = 0; i < N; ++i) {
    const double sig = oracle::kTwoPi * i / N;
    const double s1 = (sig - oracle::kPi) / oracle::kPi;
    const double gv = (s1 * s1 < 1.0) ? std::exp(-1.0 / (1.0 - s1 * s1)) : 0.0;
    const double phi = theta - w * sig;
    long double f = am[0] / oracle::kTwoPi;
    for (std::size_t k = 1; k < am.size(); ++k)
      f += (am[k] * std::cos(double(k) * phi) + bm[k] * std::sin(double(k) * phi)) / oracle::kPi;
    num += gv * f;
    den += gv;
  }
  return double(num / den);
}

// Direct quadrature of the spatial convolution (beta_eps * rho)(x0, y0) for
// an analytic density, substituting x' = eps xi:
//   int beta(xi) rho(x0 - eps xi1, y0 - eps xi2) dxi / int beta.
template <class Rho>
double convolve_plane_ref(Rho&& rho, double eps, double x0, double y0) {
  const int N = 512;
  long double num = 0.0L, den = 0.0L;
  for (int i = 0; i < N; ++i) {
    const double xi1 = oracle::kTwoPi * i / N;
    const double u = (xi1 - oracle::kPi) / oracle::kPi;
    for (int j = 0; j < N; ++j) {
      const double xi2 = oracle::kTwoPi * j / N;
      const double v = (xi2 - oracle::kPi) / oracle::kPi;
      const double r2 = u * u + v * v;
      if (r2 >= 1.0) continue;
      const double bv = std::exp(-1.0 / (1.0 - r2));
      num += bv * rho(x0 - eps * xi1, y0 - eps * xi2);
      den += bv;
    }
  }
  return double(num / den);
}

}  // namespace

TEST_SUITE("initial_data") {
  TEST_CASE("projection recovers angular moments") {
    SpatialGrid g(8, 8);
    const int ntheta = 16;
    auto chi = [](double x, double) { return 0.4 + 0.1 * std::cos(x); };

    std::vector<double> iso(g.npoints() * ntheta);
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j)
        for (int t = 0; t < ntheta; ++t)
          iso[(std::size_t(i) * g.ny + j) * ntheta + t] = chi(g.x(i), 0.0) / kTwoPi;

    AngularState s = project_f0(g, iso, ntheta, 3);
    CHECK(max_coeff_diff(s.ak(0), fill2(g, chi)) < 1e-13);
    for (int k = 1; k <= 3; ++k) {
      CHECK(max_abs_coeff(s.ak(k)) < 1e-13);
      CHECK(max_abs_coeff(s.bk(k)) < 1e-13);
    }

    // uniform in x, one anisotropic mode: f = (1 + cos theta)/(2 pi)
    std::vector<double> aniso(g.npoints() * ntheta);
    for (std::size_t i = 0; i < g.npoints(); ++i)
      for (int t = 0; t < ntheta; ++t)
        aniso[i * ntheta + t] = (1.0 + std::cos(kTwoPi * t / ntheta)) / kTwoPi;
    AngularState u = project_f0(g, aniso, ntheta, 3);
    for (double v : u.ak(0).values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
    for (double v : u.ak(1).values()) CHECK(v == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(max_abs_coeff(u.bk(1)) < 1e-13);
    CHECK(max_abs_coeff(u.ak(2)) < 1e-13);
    CHECK(max_abs_coeff(u.ak(3)) < 1e-13);

    CHECK_THROWS_AS(project_f0(g, iso, 7, 3), ConfigError);   // needs 2n+2 = 8
    CHECK_THROWS_AS(project_f0(g, iso, 16, 0), ConfigError);  // no modes requested
    std::vector<double> short_samples(g.npoints() * ntheta - 1);
    CHECK_THROWS_AS(project_f0(g, short_samples, ntheta, 3), ConfigError);
  }

  TEST_CASE("projection error decays spectrally with the truncation") {
    SpatialGrid g(8, 4);
    const int ntheta = 64;
    // smooth anisotropic profile; angular coefficients fall like Bessel I_k(1)
    auto f0 = [](double x, double, double th) {
      return (0.3 + 0.1 * std::cos(x)) * std::exp(std::cos(th - x)) / kTwoPi;
    };
    std::vector<double> samples(g.npoints() * ntheta);
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j)
        for (int t = 0; t < ntheta; ++t)
          samples[(std::size_t(i) * g.ny + j) * ntheta + t] =
              f0(g.x(i), g.y(j), kTwoPi * t / ntheta);

    auto angular_l2_err = [&](int n) {
      AngularState s = project_f0(g, samples, ntheta, n);
      std::vector<long double> acc(g.npoints(), 0.0L);
      for (int t = 0; t < ntheta; ++t) {
        const double th = kTwoPi * t / ntheta;
        const std::vector<double> rec = s.reconstruct_at(th);
        for (int i = 0; i < g.nx; ++i)
          for (int j = 0; j < g.ny; ++j) {
            const std::size_t idx = std::size_t(i) * g.ny + j;
            const double d = rec[idx] - f0(g.x(i), g.y(j), th);
            acc[idx] += (long double)(d)*d;
          }
      }
      long double worst = 0.0L;
      for (long double a : acc) worst = std::max(worst, a);
      return std::sqrt(double(worst) * kTwoPi / ntheta);
    };

    const double e4 = angular_l2_err(4);
    const double e8 = angular_l2_err(8);
    CHECK(e4 > 0.0);
    CHECK(e8 > 0.0);
    CHECK(e4 / e8 >= 10.0);
  }

  TEST_CASE("dirac moment sequences") {
    SpatialGrid g(8, 8);
    SpectralField h0 = fill2(g, [](double x, double y) { return 0.4 + 0.2 * std::cos(x) * std::cos(y); });

    AngularState al = dirac_in_angle(h0, 0.0, 4);
    for (int k = 0; k <= 4; ++k) {
      CHECK(max_coeff_diff(al.ak(k), h0) == 0.0);  // cos(0) = 1 leaves the bits alone
      if (k >= 1) CHECK(max_abs_coeff(al.bk(k)) == 0.0);
    }

    AngularState quarter = dirac_in_angle(h0, kPi / 2, 4);
    const double scale = max_abs_coeff(h0);
    CHECK(max_abs_coeff(quarter.ak(1)) <= 1e-15 * scale);
    CHECK(max_coeff_diff(quarter.bk(1), h0) == 0.0);  // sin(pi/2) rounds to one
    SpectralField mh0 = h0;
    mh0 *= -1.0;
    CHECK(max_coeff_diff(quarter.ak(2), mh0) == 0.0);
    CHECK(max_abs_coeff(quarter.bk(2)) <= 1e-15 * scale);
    CHECK(max_abs_coeff(quarter.ak(3)) <= 1e-15 * scale);
    CHECK(max_coeff_diff(quarter.bk(3), mh0) == 0.0);

    // the density of every partial sum is exactly h0
    AngularState lo = dirac_in_angle(h0, 1.234, 3);
    AngularState hi = dirac_in_angle(h0, 1.234, 9);
    CHECK(max_coeff_diff(lo.ak(0), h0) == 0.0);
    CHECK(max_coeff_diff(hi.ak(0), h0) == 0.0);

    CHECK_THROWS_AS(dirac_in_angle(h0, 0.0, 0), ConfigError);
  }

  TEST_CASE("validation flags offending nodes") {
    SpatialGrid g(8, 4);
    const int ntheta = 8;

    InitialSpec spec;
    spec.kind = InitialSpec::Kind::Samples;
    spec.grid = g;
    spec.ntheta = ntheta;
    spec.samples.assign(g.npoints() * ntheta, 0.5 / kTwoPi);
    CHECK(validate(spec).empty());

    // one negative sample
    InitialSpec bad = spec;
    bad.samples[(std::size_t(2) * g.ny + 1) * ntheta + 3] = -0.1;
    std::vector<Violation> v = validate(bad);
    REQUIRE(v.size() == 1);
    CHECK(v[0].what == "f0");
    CHECK(v[0].index == 2 * g.ny + 1);
    CHECK(v[0].value == -0.1);

    // density above the packing limit at one node
    InitialSpec packed = spec;
    for (int t = 0; t < ntheta; ++t) packed.samples[(std::size_t(0) * g.ny + 1) * ntheta + t] = 1.2 / kTwoPi;
    v = validate(packed);
    REQUIRE(v.size() == 1);
    CHECK(v[0].what == "rho0");
    CHECK(v[0].index == 1);
    CHECK(v[0].value == doctest::Approx(1.2).epsilon(1e-14));

    // mode list whose reconstruction dips negative
    InitialSpec modes;
    modes.kind = InitialSpec::Kind::Modes;
    AngularState s(g, 1);
    s.a[0] = constant(g, 0.3);
    s.ak(1) = constant(g, 0.3);
    modes.modes = s;
    v = validate(modes);
    CHECK(v.size() == g.npoints());
    CHECK(v[0].what == "f0");
    CHECK(v[0].value == doctest::Approx(-0.15 / kPi).epsilon(1e-12));

    // mode list with overpacked density
    s.ak(1) = constant(g, 0.0);
    s.a[0] = constant(g, 1.2);
    modes.modes = s;
    v = validate(modes);
    CHECK(v.size() == g.npoints());
    CHECK(v[0].what == "rho0");
    CHECK(v[0].value == doctest::Approx(1.2).epsilon(1e-14));

    // dirac amplitudes outside [0, 1]
    InitialSpec dir;
    dir.kind = InitialSpec::Kind::Dirac;
    dir.h0 = constant(g, -0.05);
    v = validate(dir);
    CHECK(v.size() == g.npoints());
    CHECK(v[0].what == "h0");
    CHECK(v[0].value == -0.05);
    dir.h0 = constant(g, 1.1);
    v = validate(dir);
    CHECK(v.size() == g.npoints());
    CHECK(v[0].value == 1.1);

    InitialSpec malformed;
    malformed.kind = InitialSpec::Kind::Samples;
    malformed.grid = g;
    malformed.ntheta = 4;
    malformed.samples.assign(3, 0.0);
    v = validate(malformed);
    REQUIRE(v.size() == 1);
    CHECK(v[0].what == "shape");
  }

  TEST_CASE("bump profiles are normalized kernels") {
    // peak heights pinned against multiprecision quadrature of the raw
    // profiles: c_gamma * e^-1 and c_beta * e^-1
    CHECK(bump_gamma(kPi) == doctest::Approx(0.26374165311417034).epsilon(1e-13));
    CHECK(bump_beta(kPi, kPi) == doctest::Approx(0.079899228749800581).epsilon(1e-13));

    CHECK(bump_gamma(0.0) == 0.0);
    CHECK(bump_gamma(kTwoPi) == 0.0);
    CHECK(bump_beta(0.0, kPi) == 0.0);
    CHECK(bump_beta(kPi + kPi, kPi) == 0.0);
    for (int i = 0; i <= 40; ++i) {
      CHECK(bump_gamma(kTwoPi * i / 40) >= 0.0);
      CHECK(bump_beta(kTwoPi * i / 40, kPi / 3) >= 0.0);
    }

    // unit masses, re-integrated at a resolution the library does not use
    long double mg = 0.0L;
    const int ng = 8192;
    for (int i = 0; i < ng; ++i) mg += bump_gamma(kTwoPi * i / ng);
    CHECK(double(mg) * kTwoPi / ng == doctest::Approx(1.0).epsilon(1e-13));

    long double mb = 0.0L;
    const int nb = 320;
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j < nb; ++j) mb += bump_beta(kTwoPi * i / nb, kTwoPi * j / nb);
    const double beta_mass = double(mb) * (kTwoPi / nb) * (kTwoPi / nb);
    CHECK(beta_mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(beta_mass * double(mg) * kTwoPi / ng == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("mollifier preserves mass and the density box") {
    SpatialGrid g(16, 16);
    InitialSpec dirac = preset("aligned-dirac", g, 0.5, 0.7);
    AngularState raw = materialize(dirac, 12);

    MollifierSpec mol;
    mol.epsilon = 0.1;
    AngularState smooth = mollify(raw, mol);
    CHECK(smooth.mass() == raw.mass());  // zero-mode multiplier is exactly one
    CHECK(std::abs(smooth.mass() - raw.mass()) <= 1e-12 * std::abs(raw.mass()));

    // constant amplitude stays a constant density
    AngularState flat = dirac_in_angle(constant(g, 0.37), 1.3, 8);
    AngularState flat_smooth = mollify(flat, mol);
    for (double v : flat_smooth.rho().values()) CHECK(v == doctest::Approx(0.37).epsilon(1e-13));

    // the density box survives every rung of the epsilon ladder
    for (double eps : {0.2, 0.1, 0.05}) {
      MollifierSpec m2;
      m2.epsilon = eps;
      AngularState out = mollify(raw, m2);
      const std::vector<double>& rho = out.rho().values();
      const auto [lo, hi] = std::minmax_element(rho.begin(), rho.end());
      CHECK(*lo >= 0.0);
      CHECK(*hi <= 1.0);
    }

    // smooth admissible data stays pointwise nonnegative
    AngularState smooth_in = materialize(preset("one-mode-perturbation", g), 4);
    CHECK(mollify(smooth_in, mol).min_over_theta(64) > 0.0);

    MollifierSpec bad;
    bad.alpha = 2.0;
    CHECK_THROWS_AS(mollify(raw, bad), ConfigError);
    bad.alpha = 1.5;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = MollifierSpec{};
    bad.epsilon = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad.epsilon = 1.5;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK_THROWS_AS(mollify(preset("isotropic-uniform", g), MollifierSpec{}, 0), ConfigError);

    InitialSpec samples;
    samples.kind = InitialSpec::Kind::Samples;
    samples.grid = g;
    samples.ntheta = 8;
    samples.samples.assign(g.npoints() * 8, 0.1);
    CHECK_THROWS_AS(mollify(samples, MollifierSpec{}, 4), ConfigError);
  }

  TEST_CASE("mollification commutes with angular rotation") {
    SpatialGrid g(8, 8);
    AngularState s = materialize(preset("aligned-dirac", g, 0.5, 0.9), 5);
    MollifierSpec mol;
    mol.epsilon = 0.2;

    const double beta = 0.77;
    AngularState path1 = mollify(rotate_angle(s, beta), mol);
    AngularState path2 = rotate_angle(mollify(s, mol), beta);
    CHECK(state_diff(path1, path2) <= 1e-12);
  }

  TEST_CASE("mollified output matches direct convolution quadrature") {
    // angular factor, on spatially uniform data
    SpatialGrid g(8, 8);
    AngularState in = dirac_in_angle(constant(g, 0.6), 2.0, 6);
    MollifierSpec mol;
    mol.epsilon = 0.25;
    AngularState out = mollify(in, mol);

    const int n = in.n_modes();
    std::vector<double> am_in(std::size_t(n) + 1), bm_in(std::size_t(n) + 1, 0.0);
    std::vector<double> am_out(std::size_t(n) + 1), bm_out(std::size_t(n) + 1, 0.0);
    am_in[0] = in.ak(0).mean();
    am_out[0] = out.ak(0).mean();
    for (int k = 1; k <= n; ++k) {
      am_in[std::size_t(k)] = in.ak(k).mean();
      bm_in[std::size_t(k)] = in.bk(k).mean();
      am_out[std::size_t(k)] = out.ak(k).mean();
      bm_out[std::size_t(k)] = out.bk(k).mean();
    }
    const double w = std::pow(mol.epsilon, mol.alpha);
    for (double th : {0.0, 0.5, 1.7, 2.0, 4.4}) {
      double rec = am_out[0] / kTwoPi;
      for (int k = 1; k <= n; ++k)
        rec += (am_out[std::size_t(k)] * std::cos(k * th) +
                bm_out[std::size_t(k)] * std::sin(k * th)) / kPi;
      CHECK(rec == doctest::Approx(convolve_angle_ref(am_in, bm_in, w, th)).epsilon(1e-9).scale(1.0));
    }

    // spatial factor, on an analytic density with cross modes
    SpatialGrid g2(16, 16);
    auto rho0 = [](double x, double y) {
      return 0.5 + 0.2 * std::cos(x) * std::sin(y) + 0.1 * std::sin(2.0 * x);
    };
    AngularState iso(g2, 1);
    iso.a[0] = fill2(g2, rho0);
    MollifierSpec mol2;
    mol2.epsilon = 0.3;
    AngularState out2 = mollify(iso, mol2);
    const std::vector<double>& rho = out2.rho().values();
    for (auto [i, j] : {std::pair{0, 0}, std::pair{2, 3}, std::pair{5, 1}, std::pair{9, 14}}) {
      const double ref = convolve_plane_ref(rho0, mol2.epsilon, g2.x(i), g2.y(j));
      CHECK(rho[std::size_t(i) * g2.ny + j] == doctest::Approx(ref).epsilon(1e-9).scale(1.0));
    }
  }

  TEST_CASE("mollified dirac converges in the dual seminorm") {
    SpatialGrid g(16, 16);
    AngularState raw = materialize(preset("aligned-dirac", g, 0.5, 0.0), 16);

    auto dual_gap = [&](double eps) {
      MollifierSpec mol;
      mol.epsilon = eps;
      AngularState smooth = mollify(raw, mol);
      AngularState diff = raw;
      for (int k = 0; k <= raw.n_modes(); ++k) {
        diff.ak(k) -= smooth.ak(k);
        if (k >= 1) diff.bk(k) -= smooth.bk(k);
      }
      return smoothing_metric(diff).second;
    };

    const double d20 = dual_gap(0.2);
    const double d10 = dual_gap(0.1);
    const double d05 = dual_gap(0.05);
    CHECK(d20 > d10);
    CHECK(d10 > d05);
    CHECK(d05 > 0.0);
  }

  TEST_CASE("csv loader round trip and lattice checks") {
    SpatialGrid g(8, 4);
    const int ntheta = 8;
    auto f0 = [](double x, double y, double th) {
      return (0.3 + 0.1 * std::cos(x)) / kTwoPi + 0.1 * std::sin(y) * std::cos(th) / kPi;
    };

    std::string csv = "x,y,theta,f\n";
    std::vector<std::string> rows;
    char buf[160];
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j)
        for (int t = 0; t < ntheta; ++t) {
          const double th = kTwoPi * t / ntheta;
          std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g", g.x(i), g.y(j), th,
                        f0(g.x(i), g.y(j), th));
          rows.push_back(buf);
        }
    std::reverse(rows.begin(), rows.end());  // row order is free
    for (const std::string& r : rows) csv += r + "\n";

    std::istringstream in(csv);
    InitialSpec spec = load_initial_csv(in);
    CHECK(spec.kind == InitialSpec::Kind::Samples);
    CHECK(spec.grid == g);
    CHECK(spec.ntheta == ntheta);
    CHECK(validate(spec).empty());

    AngularState s = materialize(spec, 2);
    CHECK(max_coeff_diff(s.ak(0), fill2(g, [](double x, double) { return 0.3 + 0.1 * std::cos(x); })) < 1e-12);
    CHECK(max_coeff_diff(s.ak(1), fill2(g, [](double, double y) { return 0.1 * std::sin(y); })) < 1e-12);
    CHECK(max_abs_coeff(s.bk(1)) < 1e-13);
    CHECK(max_abs_coeff(s.ak(2)) < 1e-13);

    auto loads = [](const std::string& text) {
      std::istringstream str(text);
      return load_initial_csv(str);
    };
    CHECK_THROWS_AS(loads(""), ConfigError);
    CHECK_THROWS_AS(loads("a,b,c\n"), ConfigError);
    CHECK_THROWS_AS(loads("x,y,theta,f\n"), ConfigError);           // no rows
    CHECK_THROWS_AS(loads("x,y,theta,f\n0,0,0\n"), ConfigError);    // short row
    CHECK_THROWS_AS(loads("x,y,theta,f\n0,0,0,abc\n"), ConfigError);

    // duplicate node
    std::string dup = csv + rows[0] + "\n";
    CHECK_THROWS_AS(loads(dup), ConfigError);

    // missing node
    std::string missing = "x,y,theta,f\n";
    for (std::size_t r = 1; r < rows.size(); ++r) missing += rows[r] + "\n";
    CHECK_THROWS_AS(loads(missing), ConfigError);

    // uniformly shifted x values fall off the lattice
    std::string shifted = "x,y,theta,f\n";
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j)
        for (int t = 0; t < ntheta; ++t) {
          std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g", g.x(i) + 0.01, g.y(j),
                        kTwoPi * t / ntheta, 0.1);
          shifted += std::string(buf) + "\n";
        }
    CHECK_THROWS_AS(loads(shifted), ConfigError);
  }

  TEST_CASE("presets are admissible") {
    SpatialGrid g(16, 16);
    const std::vector<std::string> names = preset_names();
    CHECK(names.size() == 6);
    for (const std::string& name : names) {
      InitialSpec spec = preset(name, g);
      CHECK(validate(spec).empty());
      AngularState s = materialize(spec, 3);
      CHECK(s.mass() > 0.0);
    }

    InitialSpec iso = preset("isotropic-uniform", g, 0.5);
    CHECK(iso.target_mass == 0.5);
    CHECK(materialize(iso, 2).mass() == doctest::Approx(0.5 * kTwoPi * kTwoPi).epsilon(1e-13));

    InitialSpec dir = preset("aligned-dirac", g, 0.5, 1.1);
    CHECK(dir.kind == InitialSpec::Kind::Dirac);
    CHECK(dir.theta_star == 1.1);

    CHECK_THROWS_AS(preset("no-such-preset", g), ConfigError);
    CHECK_THROWS_AS(preset("isotropic-uniform", SpatialGrid(16)), ConfigError);

    SpatialGrid circle(64);
    CHECK(gt_preset_names().size() == 3);
    for (const std::string& name : gt_preset_names()) {
      GtState s = gt_preset(name, circle);
      for (double v : s.fR.values()) CHECK(v >= 0.0);
      for (double v : s.fL.values()) CHECK(v >= 0.0);
      SpectralField rho = s.rho();
      for (double v : rho.values()) CHECK(v <= 1.0);
    }
    GtState counter = gt_preset("gt-counterflow", circle, 0.6);
    SpectralField crho = counter.rho();
    for (double v : crho.values()) CHECK(v == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(counter.mass() == doctest::Approx(0.6 * kTwoPi).epsilon(1e-13));
    CHECK_THROWS_AS(gt_preset("gt-uniform", g), ConfigError);
    CHECK_THROWS_AS(gt_preset("no-such-preset", circle), ConfigError);
  }

  TEST_CASE("materialize retruncates mode lists") {
    SpatialGrid g(8, 8);
    InitialSpec spec = preset("mixed-modes", g);

    AngularState same = materialize(spec, 2);
    CHECK(state_diff(same, spec.modes) == 0.0);

    AngularState wide = materialize(spec, 4);
    CHECK(wide.n_modes() == 4);
    CHECK(max_coeff_diff(wide.ak(2), spec.modes.ak(2)) == 0.0);
    CHECK(max_abs_coeff(wide.ak(3)) == 0.0);
    CHECK(max_abs_coeff(wide.bk(4)) == 0.0);
    CHECK(wide.mass() == spec.modes.mass());

    AngularState narrow = materialize(spec, 1);
    CHECK(narrow.n_modes() == 1);
    CHECK(max_coeff_diff(narrow.ak(1), spec.modes.ak(1)) == 0.0);
    CHECK(narrow.mass() == spec.modes.mass());

    CHECK_THROWS_AS(materialize(spec, 0), ConfigError);
  }
}
