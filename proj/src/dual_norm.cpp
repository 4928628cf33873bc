#include "abp/dual_norm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "abp/errors.hpp"
#include "abp/field.hpp"
#include "abp/grid.hpp"

namespace abp {

double dual_seminorm_angle(const AngularModes& f) {
  if (f.a.size() != f.b.size())
    throw ConfigError("angular mode lists a, b must have equal length");
  double sum_ratio = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < f.a.size(); ++i) {
    double kk = double(i + 1) * double(i + 1);
    sum_ratio += f.a[i] / kk;
    sum_sq += (f.a[i] * f.a[i] + f.b[i] * f.b[i]) / kk;
  }
  double s2 = f.mean * f.mean * (2.0 * kPi * kPi * kPi / 3.0) -
              4.0 * kPi * f.mean * sum_ratio + kPi * sum_sq;
  // The form is a squared norm; tiny negatives are cancellation noise.
  return std::sqrt(std::max(s2, 0.0));
}

DualNormWorkspace::DualNormWorkspace(int ntheta) : n_(ntheta) {
  if (n_ < 4 || n_ % 2 != 0)
    throw ConfigError("dual-norm workspace needs an even node count >= 4, got " +
                      std::to_string(n_));
}

int DualNormWorkspace::default_nodes(int max_mode) {
  return std::max(2 * max_mode + 2, 16);
}

namespace {

// cos/sin(k theta_j) with the angle reduced mod 2*pi before evaluation.
double cos_node(int k, int j, int n) {
  long idx = (long(k) * j) % n;
  return std::cos(kTwoPi * double(idx) / double(n));
}
double sin_node(int k, int j, int n) {
  long idx = (long(k) * j) % n;
  return std::sin(kTwoPi * double(idx) / double(n));
}

}  // namespace

std::vector<double> DualNormWorkspace::dirichlet_solve(const AngularModes& f) const {
  if (f.a.size() != f.b.size())
    throw ConfigError("angular mode lists a, b must have equal length");
  std::vector<double> u(std::size_t(n_), 0.0);
  for (int j = 0; j < n_; ++j) {
    double th = kTwoPi * double(j) / double(n_);
    double acc = f.mean * (kTwoPi * th - th * th) / 2.0;
    for (std::size_t i = 0; i < f.a.size(); ++i) {
      int k = int(i) + 1;
      double kk = double(k) * double(k);
      acc += (f.a[i] * (cos_node(k, j, n_) - 1.0) + f.b[i] * sin_node(k, j, n_)) / kk;
    }
    u[std::size_t(j)] = acc;
  }
  return u;
}

double DualNormWorkspace::ode_residual(const AngularModes& f) const {
  int kmax = int(f.a.size());
  if (2 * kmax + 2 > n_)
    throw ConfigError("workspace has " + std::to_string(n_) + " nodes, too few for mode " +
                      std::to_string(kmax));
  // Periodic part of u only; the mean branch contributes the exact constant
  // -u_poly'' = mean.
  std::vector<double> uper(std::size_t(n_), 0.0);
  for (int j = 0; j < n_; ++j) {
    double acc = 0.0;
    for (int k = 1; k <= kmax; ++k) {
      double kk = double(k) * double(k);
      acc += (f.a[std::size_t(k - 1)] * (cos_node(k, j, n_) - 1.0) +
              f.b[std::size_t(k - 1)] * sin_node(k, j, n_)) /
             kk;
    }
    uper[std::size_t(j)] = acc;
  }
  SpatialGrid circle(n_);
  SpectralField u = SpectralField::from_values(circle, std::move(uper));
  SpectralField lap = u.laplacian();
  const auto& upp = lap.values();

  double acc = 0.0;
  for (int j = 0; j < n_; ++j) {
    double fj = f.mean;
    for (int k = 1; k <= kmax; ++k)
      fj += f.a[std::size_t(k - 1)] * cos_node(k, j, n_) +
            f.b[std::size_t(k - 1)] * sin_node(k, j, n_);
    double r = (-upp[std::size_t(j)] + f.mean) - fj;
    acc += r * r;
  }
  return std::sqrt(acc * (kTwoPi / double(n_)));
}

}  // namespace abp
