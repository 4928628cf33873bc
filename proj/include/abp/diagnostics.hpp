#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "abp/abp2d.hpp"
#include "abp/gt1d.hpp"

namespace abp {

// One observation of a running solution. The per-state columns are filled by
// record(); the two cumulative columns (dissipation, drift_work) are running
// time integrals along the trajectory, so only the integrator can supply
// them. record() leaves both at zero.
struct DiagnosticsRecord {
  double time = 0.0;
  double mass = 0.0;
  double min_f = 0.0;     // sharpest pointwise reconstruction minimum
  double min_rho = 0.0;
  double max_rho = 0.0;
  double energy = 0.0;      // sum of squared L2 norms of the mode fields
  double dissipation = 0.0;  // int_0^t of the instantaneous dissipation rate
  double drift_work = 0.0;   // int_0^t of <u, N(u)>; E-E0+2*diss-2*work ~ 0
  double dual_norm = 0.0;   // L2-in-x norm of the angular dual seminorm
  long clip_count = 0;      // refined nodes where the mobility cutoff is active
};

DiagnosticsRecord record(const AngularState& s, const AbpParams& par);
// Two-speed variant: min_f scans both populations, the angular dual norm has
// no analogue and is reported as zero.
DiagnosticsRecord record(const GtState& s);

// L2 norm over the full (x, theta) domain together with the spatially
// integrated angular dual seminorm. The pair measures smoothing: rough data
// has a large first component; gain of regularity shows up as decay of the
// first while the second stays put.
std::pair<double, double> smoothing_metric(const AngularState& s);

// Energy envelope test: every record must satisfy
//   E(t) <= E(0) * exp(c_growth * Pe^2 / De * t) * (1 + 1e-6)
// with c_growth = 8. margin is the smallest relative gap 1 - E/envelope over
// the series (1 = far below, <= 0 = violated).
struct GronwallOutcome {
  bool pass = true;
  double worst_margin = 1.0;
  double worst_time = 0.0;
};
GronwallOutcome check_gronwall(const std::vector<DiagnosticsRecord>& series,
                               const AbpParams& par);

// Pointwise admissibility along a trajectory: min f >= -tol and
// rho in [-tol, 1 + tol] for every record. clip_total sums the mobility clip
// census so callers can additionally assert the cutoff never engaged.
struct BoundsOutcome {
  bool pass = true;
  double worst_min_f = 0.0;
  double worst_min_rho = 0.0;
  double worst_max_rho = 0.0;
  long clip_total = 0;
};
BoundsOutcome check_bounds(const std::vector<DiagnosticsRecord>& series,
                           double tol = 1e-6);

// CSV schema "abp-diagnostics v1": a version comment, a column-name row,
// then one row per record. Values are written shortest-round-trip, so a
// read-back reproduces every double bit for bit.
void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& series);
std::vector<DiagnosticsRecord> read_diagnostics_csv(std::istream& in);

}  // namespace abp
