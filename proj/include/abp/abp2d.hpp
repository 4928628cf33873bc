#pragma once

#include <vector>

#include "abp/field.hpp"

namespace abp {

// Physical and discretization parameters for the 2D model.
struct AbpParams {
  double Pe = 1.0;       // self-propulsion speed over diffusion
  double De = 1.0;       // effective translational diffusion, in (0,1]
  int n = 1;             // angular truncation
  SpatialGrid grid;      // 2D collocation grid
  double phi_mass = 0.0; // target occupied fraction, informational

  void validate() const;
};

// Truncated phase-space density as angular mode fields
//
//   f(t,x,theta) = a0/(2pi) + (1/pi) sum_{k=1..n} a_k cos(k theta) + b_k sin(k theta)
//
// The space density rho is exactly a0, the polarization is (a1, b1).
struct AngularState {
  std::vector<SpectralField> a;  // a_0..a_n
  std::vector<SpectralField> b;  // b_1..b_n, stored at index k-1
  double time = 0.0;

  AngularState() = default;
  AngularState(SpatialGrid g, int n);

  int n_modes() const { return int(a.size()) - 1; }
  const SpectralField& ak(int k) const { return a[std::size_t(k)]; }
  const SpectralField& bk(int k) const { return b[std::size_t(k) - 1]; }
  SpectralField& ak(int k) { return a[std::size_t(k)]; }
  SpectralField& bk(int k) { return b[std::size_t(k) - 1]; }
  const SpectralField& rho() const { return a[0]; }
  const SpectralField& polarization_x() const { return a[1]; }
  const SpectralField& polarization_y() const { return b[0]; }

  double mass() const { return a[0].integral(); }
  // Collocation values of f at a fixed angle.
  std::vector<double> reconstruct_at(double theta) const;
  // Minimum of the reconstruction over the grid and ntheta uniform angles.
  double min_over_theta(int ntheta) const;
};

// Pointwise cutoff crowding factor (1 - (rho)+)+ on the field's own nodes.
SpectralField mobility(const SpectralField& rho);

// Cutoff mobility evaluated on the 2x-refined collocation grid, where the
// nonlinear products live. clip_count, when given, receives the number of
// refined nodes at which a clip actually changed the value.
std::vector<double> refined_mobility_values(const SpectralField& rho, long* clip_count = nullptr);
// Truncated projection of f times a 2x-refined multiplier field.
SpectralField truncated_product(const SpectralField& f, const std::vector<double>& refined_vals);

// Mode-coupling drift velocities of the a_k (J) and b_k (Q) equations.
struct ModeVelocity {
  SpectralField jx, jy;  // J_k
  SpectralField qx, qy;  // Q_k; zero fields for k = 0
};
ModeVelocity velocities(const AngularState& s, int k);

// Diagonal decay rate of mode (k, p, q): De*(p^2+q^2) + k^2.
double linear_symbol(const AbpParams& par, int k, int p, int q);

// Full semi-discrete time derivative:
//   da0  = -Pe    div[M J_0] + De lap a0
//   da_k = -(Pe/2) div[M J_k] + De lap a_k - k^2 a_k
//   db_k = -(Pe/2) div[M Q_k] + De lap b_k - k^2 b_k
// with M the cutoff mobility of a0 evaluated on the refined grid.
AngularState rhs(const AngularState& s, const AbpParams& par);
// Drift part only (rhs minus the diagonal linear terms); this is the
// nonlinear input the exponential integrator and the Duhamel checks use.
AngularState drift_rhs(const AngularState& s, const AbpParams& par);

}  // namespace abp
