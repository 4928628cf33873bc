#include <cmath>
#include <tuple>
#include <vector>

#include "abp/errors.hpp"
#include "abp/field.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace abp;

namespace {

SpectralField random_field(SpatialGrid g, unsigned seed) {
  return SpectralField::from_values(g, oracle::random_vec(g.npoints(), seed));
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(SpatialGrid(3, 8), ConfigError);
  CHECK_THROWS_AS(SpatialGrid(8, 6).dx() + SpatialGrid(8, 5).dx(), ConfigError);
  CHECK_THROWS_AS(SpatialGrid(2), ConfigError);
  SpatialGrid g(16, 8);
  CHECK(g.npoints() == 128);
  CHECK(!g.one_dim());
  SpatialGrid line(16);
  CHECK(line.one_dim());
  CHECK(line.npoints() == 16);
}

TEST_CASE("constant field projects onto the constant mode only") {
  SpatialGrid g(16, 16);
  SpectralField f = SpectralField::from_values(g, std::vector<double>(g.npoints(), 3.0));
  CHECK(f.cc(0, 0) == 3.0);
  const auto& c = f.coeffs();
  double rest = 0.0;
  for (std::size_t k = 1; k < c.size(); ++k) rest = std::max(rest, std::abs(c[k]));
  CHECK(rest <= 1e-14);
}

TEST_CASE("cos(x) lands in the single (1,0) cos/cos slot") {
  SpatialGrid g(16, 16);
  std::vector<double> v(g.npoints());
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) v[std::size_t(i) * g.ny + j] = std::cos(g.x(i));
  SpectralField f = SpectralField::from_values(g, std::move(v));
  CHECK(f.cc(1, 0) == doctest::Approx(1.0).epsilon(1e-13));
  const auto& c = f.coeffs();
  double rest = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (k == std::size_t(1) * (g.hy() + 1)) continue;
    rest = std::max(rest, std::abs(c[k]));
  }
  CHECK(rest <= 1e-13);
}

TEST_CASE("single sin(2x)cos(y) amplitude synthesizes the basis function") {
  SpatialGrid g(16, 16);
  SpectralField f(g);
  std::size_t st = f.class_stride();
  f.coeffs_mut()[2 * st + std::size_t(2) * (g.hy() + 1) + 1] = 1.0;
  const auto& v = f.values();
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      double want = std::sin(2 * g.x(i)) * std::cos(g.y(j));
      CHECK(std::abs(v[std::size_t(i) * g.ny + j] - want) <= 1e-13);
    }
}

TEST_CASE("zero coefficients give the zero field") {
  SpectralField f((SpatialGrid(8, 8)));
  for (double x : f.values()) CHECK(x == 0.0);
}

TEST_CASE("roundtrip on random values, square and non-square") {
  const std::tuple<int, int, unsigned> shapes[] = {{16, 16, 101u}, {32, 16, 102u}, {16, 32, 103u}};
  for (auto [nx, ny, seed] : shapes) {
    SpatialGrid g(nx, ny);
    auto v = oracle::random_vec(g.npoints(), seed);
    SpectralField f = SpectralField::from_values(g, v);
    SpectralField back = SpectralField::from_coeffs(g, f.coeffs());
    CHECK(max_abs_diff(back.values(), v) <= 1e-12);
  }
}

TEST_CASE("forward transform matches brute-force projection") {
  SpatialGrid g(12, 8);
  auto v = oracle::random_vec(g.npoints(), 7u);
  SpectralField f = SpectralField::from_values(g, v);
  for (int cls = 0; cls < 4; ++cls)
    for (int p = 0; p <= g.hx(); ++p)
      for (int q = 0; q <= g.hy(); ++q) {
        bool zero_slot = (cls >= 2 && (p == 0 || p == g.hx())) ||
                         (cls % 2 == 1 && (q == 0 || q == g.hy()));
        double got = f.coeffs()[std::size_t(cls) * f.class_stride() +
                                std::size_t(p) * (g.hy() + 1) + q];
        double want = zero_slot ? 0.0 : oracle::project2(v, g.nx, g.ny, cls, p, q);
        CHECK(std::abs(got - want) <= 1e-12);
      }
}

TEST_CASE("synthesis matches brute-force evaluation of the series") {
  SpatialGrid g(12, 8);
  SpectralField f = random_field(g, 19u);
  const auto& packed = f.coeffs();
  const auto& v = f.values();
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      double want = oracle::eval2(packed, g.hx(), g.hy(), g.x(i), g.y(j));
      CHECK(std::abs(v[std::size_t(i) * g.ny + j] - want) <= 1e-12);
    }
}

TEST_CASE("roundtrip through the free-function names") {
  SpatialGrid g(16, 16);
  std::vector<double> v(g.npoints());
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      v[std::size_t(i) * g.ny + j] = std::cos(3 * g.x(i)) * std::sin(2 * g.y(j));
  auto coeffs = forward_transform(g, v);
  auto back = inverse_transform(g, coeffs);
  CHECK(max_abs_diff(back, v) <= 1e-12);
}

TEST_CASE("discrete Parseval holds for 100 random fields") {
  SpatialGrid g(16, 12);
  for (unsigned s = 0; s < 100; ++s) {
    SpectralField f = random_field(g, 1000u + s);
    long double direct = 0.0L;
    for (double x : f.values()) direct += (long double)x * x;
    direct *= g.dx() * g.dy();
    CHECK(f.l2sq() == doctest::Approx(double(direct)).epsilon(1e-10));
  }
}

TEST_CASE("derivatives match analytic fields") {
  SpatialGrid g(16, 16);
  std::vector<double> v(g.npoints()), wx(g.npoints()), wy(g.npoints()), wl(g.npoints());
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      double x = g.x(i), y = g.y(j);
      std::size_t k = std::size_t(i) * g.ny + j;
      v[k] = std::cos(2 * x) * std::sin(3 * y) + 0.3 * std::sin(x) * std::cos(2 * y);
      wx[k] = -2 * std::sin(2 * x) * std::sin(3 * y) + 0.3 * std::cos(x) * std::cos(2 * y);
      wy[k] = 3 * std::cos(2 * x) * std::cos(3 * y) - 0.6 * std::sin(x) * std::sin(2 * y);
      wl[k] = -13 * std::cos(2 * x) * std::sin(3 * y) - 0.3 * 5 * std::sin(x) * std::cos(2 * y);
    }
  SpectralField f = SpectralField::from_values(g, v);
  CHECK(max_abs_diff(f.dx().values(), wx) <= 1e-12);
  CHECK(max_abs_diff(f.dy().values(), wy) <= 1e-12);
  CHECK(max_abs_diff(f.laplacian().values(), wl) <= 1e-12);
}

TEST_CASE("Nyquist cosine: derivative image is dropped, Laplacian is exact") {
  SpatialGrid g(8);
  std::vector<double> v(8);
  for (int i = 0; i < 8; ++i) v[i] = std::cos(4 * g.x(i));
  SpectralField f = SpectralField::from_values(g, v);
  CHECK(f.c1(4) == doctest::Approx(1.0).epsilon(1e-14));
  SpectralField d = f.dx();  // keep the field alive past the loop header
  for (double c : d.coeffs()) CHECK(std::abs(c) <= 1e-14);
  CHECK(f.laplacian().c1(4) == doctest::Approx(-16.0).epsilon(1e-13));
}

TEST_CASE("1D roundtrip and derivative") {
  SpatialGrid g(32);
  std::vector<double> v(32), w(32);
  for (int i = 0; i < 32; ++i) {
    v[i] = std::sin(3 * g.x(i)) + 0.5 * std::cos(5 * g.x(i));
    w[i] = 3 * std::cos(3 * g.x(i)) - 2.5 * std::sin(5 * g.x(i));
  }
  SpectralField f = SpectralField::from_values(g, v);
  CHECK(f.s1(3) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(f.c1(5) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(max_abs_diff(f.dx().values(), w) <= 1e-12);
  CHECK(max_abs_diff(SpectralField::from_coeffs(g, f.coeffs()).values(), v) <= 1e-13);
}

TEST_CASE("refined-grid product truncates to the exact Galerkin projection") {
  SpatialGrid g(8);
  std::vector<double> a(8), b(8);
  for (int i = 0; i < 8; ++i) {
    a[i] = std::cos(g.x(i));
    b[i] = std::cos(2 * g.x(i));
  }
  SpectralField fa = SpectralField::from_values(g, a);
  SpectralField fb = SpectralField::from_values(g, b);
  auto ra = fa.values_refined(2);
  auto rb = fb.values_refined(2);
  std::vector<double> prod(ra.size());
  for (std::size_t i = 0; i < ra.size(); ++i) prod[i] = ra[i] * rb[i];
  SpectralField fp = SpectralField::from_refined_values(g, prod, 2);
  // cos x * cos 2x = (cos x + cos 3x)/2, fully resolvable
  CHECK(fp.c1(1) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(fp.c1(3) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(std::abs(fp.c1(0)) <= 1e-14);
  CHECK(std::abs(fp.c1(2)) <= 1e-14);
  CHECK(std::abs(fp.c1(4)) <= 1e-14);

  // cos 4x * cos x spills one component past the truncation; the kept part
  // must still be the exact projection (no aliasing back onto low modes).
  for (int i = 0; i < 8; ++i) b[i] = std::cos(4 * g.x(i));
  SpectralField fn = SpectralField::from_values(g, b);
  auto rn = fn.values_refined(2);
  for (std::size_t i = 0; i < ra.size(); ++i) prod[i] = ra[i] * rn[i];
  SpectralField ft = SpectralField::from_refined_values(g, prod, 2);
  CHECK(ft.c1(3) == doctest::Approx(0.5).epsilon(1e-13));
  for (int p = 0; p <= 4; ++p)
    if (p != 3) CHECK(std::abs(ft.c1(p)) <= 1e-14);
}

TEST_CASE("2D refined product: squared field resolves exactly") {
  SpatialGrid g(8, 8);
  std::vector<double> v(g.npoints());
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) v[std::size_t(i) * 8 + j] = std::cos(g.x(i)) * std::cos(g.y(j));
  SpectralField f = SpectralField::from_values(g, v);
  auto r = f.values_refined(2);
  std::vector<double> sq(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) sq[i] = r[i] * r[i];
  SpectralField fs = SpectralField::from_refined_values(g, sq, 2);
  // (cos x cos y)^2 = (1 + cos 2x)(1 + cos 2y)/4
  CHECK(fs.cc(0, 0) == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(fs.cc(2, 0) == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(fs.cc(0, 2) == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(fs.cc(2, 2) == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(std::abs(fs.cc(1, 1)) <= 1e-14);
}

TEST_CASE("shape errors are configuration errors") {
  SpatialGrid g(8, 8);
  CHECK_THROWS_AS(SpectralField::from_values(g, std::vector<double>(63)), ConfigError);
  CHECK_THROWS_AS(SpectralField::from_coeffs(g, std::vector<double>(17)), ConfigError);
  CHECK_THROWS_AS(SpectralField(SpatialGrid(8)).dy(), ConfigError);
  CHECK_THROWS_AS(SpectralField::from_refined_values(g, std::vector<double>(10), 2),
                  ConfigError);
}

TEST_CASE("angular quadrature: trapezoid on the circle") {
  std::vector<double> c(8, 1.0 / kTwoPi);
  CHECK(angular_quadrature(c) == doctest::Approx(1.0).epsilon(1e-15));

  std::vector<double> v(16);
  for (int j = 0; j < 16; ++j) v[j] = std::cos(3 * kTwoPi * j / 16);
  CHECK(std::abs(angular_quadrature(v)) <= 1e-14);

  // profile with 5 angular modes: the quadrature recovers the zeroth
  // integral coefficient a0 exactly once nodes >= 2n+2
  auto a = oracle::random_vec(6, 55u), b = oracle::random_vec(6, 56u);
  int ntheta = 12;
  std::vector<double> f(ntheta);
  for (int j = 0; j < ntheta; ++j) {
    double th = kTwoPi * j / ntheta;
    double acc = a[0] / kTwoPi;
    for (int k = 1; k <= 5; ++k)
      acc += (a[k] * std::cos(k * th) + b[k] * std::sin(k * th)) / kPi;
    f[j] = acc;
  }
  CHECK(angular_quadrature(f) == doctest::Approx(a[0]).epsilon(1e-12));

  std::vector<double> w(ntheta, kTwoPi / ntheta);
  CHECK(angular_quadrature(f, w) == doctest::Approx(a[0]).epsilon(1e-12));
  CHECK_THROWS_AS(angular_quadrature(std::vector<double>{1.0}), ConfigError);
  CHECK_THROWS_AS(angular_quadrature(f, std::vector<double>{1.0, 2.0}), ConfigError);
}

}  // TEST_SUITE
