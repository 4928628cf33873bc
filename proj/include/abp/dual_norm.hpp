#pragma once

#include <vector>

namespace abp {

// Angular profile as literal trigonometric amplitudes:
//   f(theta) = mean + sum_k a[k-1] cos(k theta) + b[k-1] sin(k theta).
// Note these are plain amplitudes, not the integral-convention mode fields
// of the solver state; callers convert (divide by pi, mean by 2*pi).
struct AngularModes {
  double mean = 0.0;
  std::vector<double> a, b;
};

// || d/dtheta u ||_{L2(0,2pi)} where u solves the Dirichlet problem
// -u'' = f on (0,2pi), u(0) = u(2pi) = 0. Closed form per mode:
//   cos k -> (cos k theta - 1)/k^2,  sin k -> sin(k theta)/k^2,
//   mean  -> mean*(2 pi theta - theta^2)/2,
// giving
//   seminorm^2 = mean^2 (2 pi^3/3) - 4 pi mean sum a_k/k^2
//              + pi sum (a_k^2 + b_k^2)/k^2.
double dual_seminorm_angle(const AngularModes& f);

// Grid-sampled view of the same Dirichlet solve, used to certify the closed
// form: u is evaluated on uniform nodes theta_j = 2*pi*j/n and the ODE
// residual -u'' - f is measured with spectral differentiation.
class DualNormWorkspace {
 public:
  explicit DualNormWorkspace(int ntheta);
  static int default_nodes(int max_mode);

  int ntheta() const { return n_; }
  // u(theta_j) including the quadratic-in-theta branch for the mean.
  std::vector<double> dirichlet_solve(const AngularModes& f) const;
  // Discrete L2 of (-u'' - f). The periodic part of u is a trigonometric
  // polynomial, so -u'' splits into a circle-transform derivative plus the
  // exact constant from the mean branch.
  double ode_residual(const AngularModes& f) const;

 private:
  int n_;
};

}  // namespace abp
