#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "abp/grid.hpp"

namespace abp {

// Real scalar field on the periodic domain with a dual representation:
// collocation values at the grid nodes and amplitudes of the tensor
// trigonometric basis
//
//   v(x,y) = sum_{p,q} cc[p][q] cos(px)cos(qy) + cs[p][q] cos(px)sin(qy)
//                    + sc[p][q] sin(px)cos(qy) + ss[p][q] sin(px)sin(qy)
//
// with p = 0..nx/2, q = 0..ny/2. Sine rows at frequency 0 and at the
// Nyquist index are structural zeros; they stay in storage so all four
// class tensors share one shape. The 1D variant keeps two tensors c, s.
//
// Whichever representation is stale is rebuilt on demand. A field must not
// be mutated from two threads at once (single-writer caches); distinct
// fields are safe to use concurrently.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(SpatialGrid g);

  static SpectralField from_values(SpatialGrid g, std::vector<double> v);
  static SpectralField from_coeffs(SpatialGrid g, std::vector<double> packed);
  // Projection from samples on a factor-refined grid (factor*nx by
  // factor*ny nodes); frequencies above the target resolution are dropped.
  static SpectralField from_refined_values(SpatialGrid g, const std::vector<double>& v,
                                           int factor);

  const SpatialGrid& grid() const { return g_; }
  bool one_dim() const { return g_.one_dim(); }
  std::size_t value_count() const { return g_.npoints(); }
  std::size_t coeff_count() const;

  const std::vector<double>& values() const;
  const std::vector<double>& coeffs() const;
  std::vector<double>& values_mut();
  std::vector<double>& coeffs_mut();

  // Packed layout: class tensors in order cc, cs, sc, ss (2D) or c, s (1D),
  // each row-major (hx+1) x (hy+1), resp. length hx+1.
  std::size_t class_stride() const;
  double cc(int p, int q) const { return coeffs()[idx2(0, p, q)]; }
  double cs(int p, int q) const { return coeffs()[idx2(1, p, q)]; }
  double sc(int p, int q) const { return coeffs()[idx2(2, p, q)]; }
  double ss(int p, int q) const { return coeffs()[idx2(3, p, q)]; }
  double c1(int p) const { return coeffs()[std::size_t(p)]; }
  double s1(int p) const { return coeffs()[class_stride() + std::size_t(p)]; }

  double mean() const { return coeffs()[0]; }
  double integral() const;
  // Quadrature L2 norm squared: equals sum of squared amplitudes weighted by
  // the discrete basis norms (2pi per axis at frequency 0 and Nyquist, pi
  // in between).
  double l2sq() const;

  SpectralField dx() const;
  SpectralField dy() const;
  SpectralField laplacian() const;

  std::vector<double> values_refined(int factor) const;

  // Coefficient-space linear algebra; shapes must match.
  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);
  SpectralField& axpy(double a, const SpectralField& x);

 private:
  std::size_t idx2(int cls, int p, int q) const;
  void refresh_values() const;
  void refresh_coeffs() const;

  SpatialGrid g_;
  mutable std::vector<double> vals_, coef_;
  mutable bool vals_ok_ = true, coef_ok_ = true;
};

// Contract names for the two directions of the dual representation.
inline const std::vector<double>& forward_transform(const SpectralField& f) {
  return f.coeffs();
}
inline const std::vector<double>& inverse_transform(const SpectralField& f) {
  return f.values();
}
std::vector<double> forward_transform(const SpatialGrid& g, const std::vector<double>& values);
std::vector<double> inverse_transform(const SpatialGrid& g, const std::vector<double>& packed);

// Trapezoid rule on the periodic circle, nodes theta_j = 2*pi*j/n: exact for
// trigonometric polynomials of degree <= n-1. The weighted overload takes
// caller-supplied node weights in place of the uniform 2*pi/n.
double angular_quadrature(std::span<const double> values);
double angular_quadrature(std::span<const double> values, std::span<const double> weights);

}  // namespace abp
