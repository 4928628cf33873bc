#include "abp/diagnostics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "abp/dual_norm.hpp"
#include "abp/errors.hpp"

namespace abp {
namespace {

void minmax_of(const std::vector<double>& v, double& lo, double& hi) {
  auto [a, b] = std::minmax_element(v.begin(), v.end());
  lo = *a;
  hi = *b;
}

// sqrt of int_x seminorm(x)^2 dx, trapezoid over the collocation nodes. The
// per-node angular profile uses literal trig amplitudes, so the solver's
// integral-convention coefficients are rescaled by 1/pi (1/2pi for the mean).
double integrated_dual_seminorm(const AngularState& s) {
  const int n = int(s.n_modes());
  const std::size_t nn = std::size_t(n);
  std::vector<const std::vector<double>*> av(nn + 1), bv(nn);
  for (int k = 0; k <= n; ++k) av[std::size_t(k)] = &s.a[std::size_t(k)].values();
  for (int k = 1; k <= n; ++k) bv[std::size_t(k - 1)] = &s.b[std::size_t(k - 1)].values();

  const SpatialGrid& g = s.a[0].grid();
  const double w = g.one_dim() ? g.dx() : g.dx() * g.dy();
  AngularModes m;
  m.a.resize(std::size_t(n));
  m.b.resize(std::size_t(n));
  double acc = 0.0;
  for (std::size_t i = 0; i < g.npoints(); ++i) {
    m.mean = (*av[0])[i] / kTwoPi;
    for (int k = 1; k <= n; ++k) {
      m.a[std::size_t(k - 1)] = (*av[std::size_t(k)])[i] / kPi;
      m.b[std::size_t(k - 1)] = (*bv[std::size_t(k - 1)])[i] / kPi;
    }
    double sn = dual_seminorm_angle(m);
    acc += sn * sn * w;
  }
  return std::sqrt(std::max(acc, 0.0));
}

double total_energy(const AngularState& s) {
  double e = s.a[0].l2sq();
  for (std::size_t k = 1; k < s.a.size(); ++k)
    e += s.a[k].l2sq() + s.b[k - 1].l2sq();
  return e;
}

}  // namespace

DiagnosticsRecord record(const AngularState& s, const AbpParams& par) {
  par.validate();
  if (int(s.n_modes()) != par.n)
    throw ConfigError("state truncation does not match params.n");
  DiagnosticsRecord r;
  r.time = s.time;
  r.mass = s.mass();
  r.min_f = s.min_over_theta(std::max(2 * par.n + 2, 64));
  minmax_of(s.rho().values(), r.min_rho, r.max_rho);
  r.energy = total_energy(s);
  r.dual_norm = integrated_dual_seminorm(s);
  refined_mobility_values(s.rho(), &r.clip_count);
  return r;
}

DiagnosticsRecord record(const GtState& s) {
  DiagnosticsRecord r;
  r.time = s.time;
  r.mass = s.mass();
  const auto& vr = s.fR.values();
  const auto& vl = s.fL.values();
  r.min_f = std::min(*std::min_element(vr.begin(), vr.end()),
                     *std::min_element(vl.begin(), vl.end()));
  SpectralField rho = s.rho();
  minmax_of(rho.values(), r.min_rho, r.max_rho);
  r.energy = s.fR.l2sq() + s.fL.l2sq();
  r.dual_norm = 0.0;
  refined_mobility_values(rho, &r.clip_count);
  return r;
}

std::pair<double, double> smoothing_metric(const AngularState& s) {
  double l2 = s.a[0].l2sq() / kTwoPi;
  for (std::size_t k = 1; k < s.a.size(); ++k)
    l2 += (s.a[k].l2sq() + s.b[k - 1].l2sq()) / kPi;
  return {std::sqrt(l2), integrated_dual_seminorm(s)};
}

GronwallOutcome check_gronwall(const std::vector<DiagnosticsRecord>& series,
                               const AbpParams& par) {
  par.validate();
  if (series.size() < 2)
    throw ConfigError("gronwall check needs at least two records");
  const double rate = 8.0 * par.Pe * par.Pe / par.De;
  const double e0 = series.front().energy;
  const double t0 = series.front().time;
  GronwallOutcome out;
  // The first record anchors E(0); its own margin is the trivial 1e-6 slack
  // and is not counted in the reported minimum.
  out.worst_margin = 1.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const DiagnosticsRecord& r = series[i];
    double env = e0 * std::exp(rate * (r.time - t0)) * (1.0 + 1e-6);
    if (r.energy > env) out.pass = false;
    double margin = 1.0 - r.energy / env;
    if (i > 0 && margin < out.worst_margin) {
      out.worst_margin = margin;
      out.worst_time = r.time;
    }
  }
  return out;
}

BoundsOutcome check_bounds(const std::vector<DiagnosticsRecord>& series, double tol) {
  if (series.empty()) throw ConfigError("bounds check needs at least one record");
  BoundsOutcome out;
  out.worst_min_f = series.front().min_f;
  out.worst_min_rho = series.front().min_rho;
  out.worst_max_rho = series.front().max_rho;
  for (const DiagnosticsRecord& r : series) {
    out.worst_min_f = std::min(out.worst_min_f, r.min_f);
    out.worst_min_rho = std::min(out.worst_min_rho, r.min_rho);
    out.worst_max_rho = std::max(out.worst_max_rho, r.max_rho);
    out.clip_total += r.clip_count;
  }
  out.pass = out.worst_min_f >= -tol && out.worst_min_rho >= -tol &&
             out.worst_max_rho <= 1.0 + tol;
  return out;
}

namespace {

constexpr const char* kCsvVersion = "# abp-diagnostics v1";
constexpr const char* kCsvColumns =
    "time,mass,min_f,min_rho,max_rho,energy,dissipation,drift_work,dual_norm,clip_count";

void put_double(std::string& line, double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;  // 32 bytes always hold the shortest round-trip form
  line.append(buf, p);
}

double take_double(const std::string& line, std::size_t& pos, std::size_t row) {
  std::size_t end = line.find(',', pos);
  if (end == std::string::npos) end = line.size();
  double v = 0.0;
  auto [p, ec] = std::from_chars(line.data() + pos, line.data() + end, v);
  if (ec != std::errc() || p != line.data() + end)
    throw ConfigError("diagnostics csv: bad number in data row " + std::to_string(row));
  pos = end < line.size() ? end + 1 : line.size();
  return v;
}

}  // namespace

void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& series) {
  std::string line;
  out << kCsvVersion << '\n' << kCsvColumns << '\n';
  for (const DiagnosticsRecord& r : series) {
    line.clear();
    put_double(line, r.time);
    line += ',';
    put_double(line, r.mass);
    line += ',';
    put_double(line, r.min_f);
    line += ',';
    put_double(line, r.min_rho);
    line += ',';
    put_double(line, r.max_rho);
    line += ',';
    put_double(line, r.energy);
    line += ',';
    put_double(line, r.dissipation);
    line += ',';
    put_double(line, r.drift_work);
    line += ',';
    put_double(line, r.dual_norm);
    line += ',';
    line += std::to_string(r.clip_count);
    out << line << '\n';
  }
}

std::vector<DiagnosticsRecord> read_diagnostics_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvVersion)
    throw ConfigError("diagnostics csv: missing version line");
  if (!std::getline(in, line) || line != kCsvColumns)
    throw ConfigError("diagnostics csv: unexpected column header");
  std::vector<DiagnosticsRecord> series;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++row;
    std::size_t pos = 0;
    DiagnosticsRecord r;
    r.time = take_double(line, pos, row);
    r.mass = take_double(line, pos, row);
    r.min_f = take_double(line, pos, row);
    r.min_rho = take_double(line, pos, row);
    r.max_rho = take_double(line, pos, row);
    r.energy = take_double(line, pos, row);
    r.dissipation = take_double(line, pos, row);
    r.drift_work = take_double(line, pos, row);
    r.dual_norm = take_double(line, pos, row);
    std::size_t end = line.find(',', pos);
    if (end != std::string::npos)
      throw ConfigError("diagnostics csv: too many columns in data row " + std::to_string(row));
    try {
      r.clip_count = std::stol(line.substr(pos));
    } catch (const std::exception&) {
      throw ConfigError("diagnostics csv: bad clip count in data row " + std::to_string(row));
    }
    series.push_back(r);
  }
  return series;
}

}  // namespace abp
