#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "abp/abp2d.hpp"
#include "abp/gt1d.hpp"

namespace abp {

// Initial datum in one of three forms: raw samples on an x-by-theta tensor
// grid, a materialized angular mode list, or an angle-Dirac h0(x)*delta at a
// fixed orientation (only its moment sequence is ever used).
struct InitialSpec {
  enum class Kind { Samples, Modes, Dirac };
  Kind kind = Kind::Modes;
  double target_mass = 0.0;  // intended occupied fraction, informational

  // Samples: f0 on grid nodes x theta nodes, theta fastest, uniform theta
  // lattice theta_t = 2*pi*t/ntheta. grid describes this lattice only; the
  // mode and Dirac payloads carry their own.
  SpatialGrid grid;
  int ntheta = 0;
  std::vector<double> samples;

  // Modes: coefficient fields as stored by the solver.
  AngularState modes;

  // Dirac: nonnegative amplitude field and the alignment angle.
  SpectralField h0;
  double theta_star = 0.0;
};

// One admissibility defect: the check it violates ("f0", "rho0" or "h0"),
// the flat node index, and the offending value.
struct Violation {
  std::string what;
  long index = 0;
  double value = 0.0;
};

// Pointwise f0 >= -1e-12 and density rho0 in [-1e-12, 1+1e-12] (for Dirac
// data: h0 within the same box). Returns every violating node; never throws.
std::vector<Violation> validate(const InitialSpec& spec);

// Angular Galerkin projection of tensor-grid samples: per spatial node,
//   a_k(x) = int f0(x,theta) cos(k theta) dtheta,   b_k likewise with sin,
// by the exact trapezoid rule. Requires ntheta >= 2n+2.
AngularState project_f0(const SpatialGrid& g, const std::vector<double>& samples,
                        int ntheta, int n);

// Moment sequence of h0(x)*delta(theta - theta_star) up to mode n:
// a_k = h0 cos(k theta_star), b_k = h0 sin(k theta_star). The density of
// every partial sum is exactly h0.
AngularState dirac_in_angle(const SpectralField& h0, double theta_star, int n);

// Realize a spec as a truncation-n solver state. Samples are projected,
// mode lists are re-truncated (padding with zero modes or dropping the
// tail), Dirac data is materialized.
AngularState materialize(const InitialSpec& spec, int n);

// Product mollifier: spatial bump beta_eps(x) = eps^-2 beta(x/eps) and
// angular bump gamma_eps(theta) = eps^-alpha gamma(theta/eps^alpha),
// applied as Fourier multipliers. alpha > 2 keeps the angular width
// subordinate to the spatial one.
struct MollifierSpec {
  double epsilon = 0.1;
  double alpha = 3.0;
  void validate() const;  // 0 < eps <= 1, alpha > 2
};

// The normalized bump profiles: smooth, nonnegative, supported in the open
// domain, symmetric about (pi,pi) resp. pi, unit integral.
double bump_beta(double x, double y);
double bump_gamma(double theta);

AngularState mollify(const AngularState& modes, const MollifierSpec& spec);
// Same, for mode-list or Dirac data materialized at truncation n.
AngularState mollify(const InitialSpec& data, const MollifierSpec& spec, int n);

// Built-in 2D data. mass sets the isotropic baseline (the a0 level, or the
// h0 level for the Dirac preset); the tuned perturbation amplitudes keep
// every preset admissible at the default mass.
//   isotropic-uniform, one-mode-perturbation, banded-density,
//   polarized-stripe, mixed-modes (regular), aligned-dirac (Dirac kind).
InitialSpec preset(const std::string& name, SpatialGrid g, double mass = 0.5,
                   double theta_star = 0.0);
std::vector<std::string> preset_names();

// Built-in two-speed data: gt-uniform, gt-pulse, gt-counterflow.
GtState gt_preset(const std::string& name, SpatialGrid g, double mass = 0.6);
std::vector<std::string> gt_preset_names();

// Samples spec from CSV with header "x,y,theta,f", one sample per row, rows
// covering a full uniform tensor grid in any order.
InitialSpec load_initial_csv(std::istream& in);

}  // namespace abp
