#pragma once

// Brute-force reference implementations used as test oracles. Everything
// here re-derives results with plain loops, std::cos/std::sin and long
// double accumulation, sharing no code path with the library.

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

inline double dot_ref(const double* x, const double* y, std::size_t n) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < n; ++i) acc += (long double)x[i] * y[i];
  return double(acc);
}

inline double sum_ref(const double* x, std::size_t n) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return double(acc);
}

inline std::vector<double> random_vec(std::size_t n, unsigned seed, double lo = -1.0,
                                      double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

// Direct evaluation of the packed tensor-trig amplitudes at one point.
// Layout mirrors the documented coefficient order cc|cs|sc|ss, each
// (hx+1) x (hy+1) row-major.
inline double eval2(const std::vector<double>& packed, int hx, int hy, double x, double y) {
  std::size_t st = std::size_t(hx + 1) * (hy + 1);
  long double acc = 0.0L;
  for (int p = 0; p <= hx; ++p)
    for (int q = 0; q <= hy; ++q) {
      std::size_t k = std::size_t(p) * (hy + 1) + q;
      double cx = std::cos(p * x), sx = std::sin(p * x);
      double cy = std::cos(q * y), sy = std::sin(q * y);
      acc += (long double)packed[k] * cx * cy + (long double)packed[st + k] * cx * sy +
             (long double)packed[2 * st + k] * sx * cy + (long double)packed[3 * st + k] * sx * sy;
    }
  return double(acc);
}

inline double eval1(const std::vector<double>& packed, int h, double x) {
  long double acc = 0.0L;
  for (int p = 0; p <= h; ++p)
    acc += (long double)packed[p] * std::cos(p * x) +
           (long double)packed[(h + 1) + p] * std::sin(p * x);
  return double(acc);
}

// Direct discrete projection of 2D samples onto one basis function.
// cls: 0 = cos cos, 1 = cos sin, 2 = sin cos, 3 = sin sin.
inline double project2(const std::vector<double>& v, int nx, int ny, int cls, int p, int q) {
  long double acc = 0.0L;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      double x = kTwoPi * i / nx, y = kTwoPi * j / ny;
      double bx = (cls < 2) ? std::cos(p * x) : std::sin(p * x);
      double by = (cls % 2 == 0) ? std::cos(q * y) : std::sin(q * y);
      acc += (long double)v[std::size_t(i) * ny + j] * bx * by;
    }
  auto w = [](int r, int n, bool cosine) {
    if (cosine) return (r == 0 || 2 * r == n) ? double(n) : n / 2.0;
    return n / 2.0;
  };
  return double(acc) / (w(p, nx, cls < 2) * w(q, ny, cls % 2 == 0));
}

}  // namespace oracle
