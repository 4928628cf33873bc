#include "abp/gt1d.hpp"

#include <cmath>
#include <string>

#include "abp/abp2d.hpp"
#include "abp/errors.hpp"
#include "abp/threads.hpp"

namespace abp {

namespace {

void require_1d_pair(const SpectralField& r, const SpectralField& l) {
  if (!r.one_dim()) throw ConfigError("GtState requires a 1D grid");
  if (!(r.grid() == l.grid())) throw ConfigError("fR and fL must share one grid");
}

void scan_finite(const SpectralField& f, const char* label) {
  const auto& c = f.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!std::isfinite(c[i])) throw NumericError("non-finite coefficient", label, long(i));
}

}  // namespace

GtState::GtState(SpatialGrid g) : fR(g), fL(g) {
  if (!g.one_dim()) throw ConfigError("GtState requires a 1D grid");
}

SpectralField GtState::rho() const {
  SpectralField r = fR;
  r += fL;
  return r;
}

SpectralField GtState::pol() const {
  SpectralField p = fR;
  p -= fL;
  return p;
}

double GtState::mass() const { return fR.integral() + fL.integral(); }

std::pair<SpectralField, SpectralField> rho_p(const GtState& s) { return {s.rho(), s.pol()}; }

GtState from_rho_p(const SpectralField& rho, const SpectralField& p, double time) {
  require_1d_pair(rho, p);
  GtState s(rho.grid());
  s.fR = rho;
  s.fR += p;
  s.fR *= 0.5;
  s.fL = rho;
  s.fL -= p;
  s.fL *= 0.5;
  s.time = time;
  return s;
}

GtState gt_rhs(const GtState& s, double Pe) {
  if (!(Pe >= 0.0)) throw ConfigError("Pe must be nonnegative, got " + std::to_string(Pe));
  require_1d_pair(s.fR, s.fL);
  scan_finite(s.fR, "fR");
  scan_finite(s.fL, "fL");

  auto mref = refined_mobility_values(s.rho());
  GtState out(s.fR.grid());
  out.time = s.time;

  parallel_for(2, [&](std::size_t side) {
    const SpectralField& self = side == 0 ? s.fR : s.fL;
    const SpectralField& other = side == 0 ? s.fL : s.fR;
    double speed = side == 0 ? -Pe : Pe;

    SpectralField d = truncated_product(self, mref).dx();
    d *= speed;
    d += self.laplacian();
    d += other;
    d -= self;
    (side == 0 ? out.fR : out.fL) = std::move(d);
  });
  return out;
}

std::pair<SpectralField, SpectralField> gt_drift_rho_p(const SpectralField& rho,
                                                       const SpectralField& p, double Pe) {
  if (!(Pe >= 0.0)) throw ConfigError("Pe must be nonnegative, got " + std::to_string(Pe));
  require_1d_pair(rho, p);
  auto mref = refined_mobility_values(rho);
  SpectralField drho = truncated_product(p, mref).dx();
  drho *= -Pe;
  SpectralField dp = truncated_product(rho, mref).dx();
  dp *= -Pe;
  return {std::move(drho), std::move(dp)};
}

}  // namespace abp
