#pragma once

#include <vector>

#include "abp/abp2d.hpp"
#include "abp/field.hpp"
#include "abp/gt1d.hpp"

namespace abp {

// Periodic heat kernel on the circle,
//
//   Phi(t,x) = 1/(2pi) + (1/pi) sum_{n>=1} e^{-n^2 t} cos(nx),
//
// evaluated by the truncated cosine series for t >= 0.05 and by the
// theta-3 infinite product for smaller t, where the series converges
// slowly and can go slightly negative. The product form
//
//   Phi = (1/2pi) prod_n (1 - e^{-2nt}) (1 + 2 e^{-(2n-1)t} cos x + e^{-(4n-2)t})
//
// is nonnegative factor by factor.
class KernelEval {
 public:
  explicit KernelEval(double eps_ser = 1e-14);

  double series_tolerance() const { return eps_; }
  // Smallest N with exp(-N^2 t) below the series tolerance.
  int truncation_index(double t) const;

  double phi1d(double t, double x) const;
  double phi1d_series(double t, double x) const;
  double phi1d_product(double t, double x) const;

  // Time-space L2 accumulation of the kernel,
  //   t + sum_{n>=1} (1 - e^{-2 n^2 t}) / (2 n^2),
  // with the truncated tail summed in closed form (pi^2/12 minus the
  // retained partial sum) so small t loses no accuracy.
  double phi1d_l2_time_integral(double t) const;

  // Product kernel on the periodic phase space (x, y, theta).
  double phi3d(double t, double x, double y, double theta) const;

 private:
  double eps_;
};

// Spectral solution of the periodic Cauchy problem: every mode p (and q)
// is damped by exp(-rate*p^2*t). With unit rate this is exactly the
// convolution with the kernel above. t must be nonnegative; t = 0 is the
// identity.
SpectralField heat_convolve(const SpectralField& psi, double t, double rate);
SpectralField heat_convolve(const SpectralField& psi, double t, double rate_x, double rate_y);

// Outcome of reconstructing a stored trajectory through its own integral
// equation: final state minus (propagated data + time-quadrature of the
// propagated source).
struct DuhamelReport {
  double max_residual = 0.0;
  std::vector<double> residual;  // collocation values of the worst residual field
  int snapshots = 0;
};

// Checks fR against Phi(t)*fR0 + integral of Phi(t-s)*(drift + exchange).
// Snapshots must start at t = 0 on a uniform time lattice (composite
// trapezoid in time); at least two are required.
DuhamelReport duhamel_residual_1d(const std::vector<GtState>& traj, double Pe);

// Same reconstruction for the angular system, mode (k,p,q) propagated by
// exp(-(De (p^2+q^2) + k^2) tau), with the drift divergence as source.
DuhamelReport duhamel_residual_3d(const std::vector<AngularState>& traj, const AbpParams& par);

}  // namespace abp
