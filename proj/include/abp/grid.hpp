#pragma once

#include <cstddef>
#include <vector>

namespace abp {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

// Uniform collocation grid on the periodic square [0,2pi)^2, or on the
// circle [0,2pi) when ny == 0. Nodes are x_i = 2*pi*i/nx.
struct SpatialGrid {
  int nx = 0;
  int ny = 0;  // 0 selects the 1D circle variant

  SpatialGrid() = default;
  explicit SpatialGrid(int nx_, int ny_ = 0);

  bool one_dim() const { return ny == 0; }
  std::size_t npoints() const {
    return one_dim() ? std::size_t(nx) : std::size_t(nx) * std::size_t(ny);
  }
  int hx() const { return nx / 2; }
  int hy() const { return ny / 2; }
  double dx() const { return kTwoPi / nx; }
  double dy() const { return kTwoPi / ny; }
  double x(int i) const { return kTwoPi * double(i) / double(nx); }
  double y(int j) const { return kTwoPi * double(j) / double(ny); }

  friend bool operator==(const SpatialGrid&, const SpatialGrid&) = default;
};

// Trig samples cos(r*2pi*i/n) and sin(r*2pi*i/n) for r = 0..n/2, i = 0..n-1.
// The argument is reduced mod n before evaluation, so rows stay accurate for
// large r*i. Tables are built once per n and shared.
struct AxisTables {
  int n = 0;
  int h = 0;
  std::vector<double> cosv, sinv;  // (h+1) rows of length n

  const double* cos_row(int r) const { return cosv.data() + std::size_t(r) * n; }
  const double* sin_row(int r) const { return sinv.data() + std::size_t(r) * n; }
};

const AxisTables& axis_tables(int npoints);

}  // namespace abp
