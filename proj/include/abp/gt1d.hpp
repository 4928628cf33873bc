#pragma once

#include <utility>

#include "abp/field.hpp"
#include "abp/grid.hpp"

namespace abp {

// Two-speed crowded transport on the circle: right- and left-moving
// populations swap at unit rate while the shared mobility factor
// M = clamp(1 - rho, 0, 1) throttles the drift wherever the total
// density rho = fR + fL approaches the packing limit.
struct GtState {
  SpectralField fR;
  SpectralField fL;
  double time = 0.0;

  explicit GtState(SpatialGrid g);

  SpectralField rho() const;  // fR + fL
  SpectralField pol() const;  // fR - fL
  double mass() const;        // integral of fR + fL over the circle
};

// Diagonal variables (fR + fL, fR - fL) and their inverse.
std::pair<SpectralField, SpectralField> rho_p(const GtState& s);
GtState from_rho_p(const SpectralField& rho, const SpectralField& p, double time = 0.0);

// Semi-discrete time derivative:
//   d/dt fR = -Pe d/dx(fR M) + fR'' + (fL - fR)
//   d/dt fL = +Pe d/dx(fL M) + fL'' + (fR - fL)
// Nonlinear products are formed on the 2x-refined grid, as in the 2D
// solver, so the truncation is an exact Galerkin projection.
GtState gt_rhs(const GtState& s, double Pe);

// Drift terms in diagonal variables, where the flip term is linear:
//   d/dt rho = -Pe d/dx(p M)   + rho''
//   d/dt p   = -Pe d/dx(rho M) + p''  - 2 p
// Returns only the two -Pe d/dx(. M) pieces; the caller owns the
// stiff linear part (this is what the exponential stepper consumes).
std::pair<SpectralField, SpectralField> gt_drift_rho_p(const SpectralField& rho,
                                                       const SpectralField& p, double Pe);

}  // namespace abp
