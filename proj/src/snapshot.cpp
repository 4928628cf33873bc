#include "abp/snapshot.hpp"

#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "abp/errors.hpp"
#include "abp/grid.hpp"

namespace abp {
namespace {

constexpr char kMagic[4] = {'A', 'B', 'P', 'S'};

// The format is little-endian by definition; every target this builds on is
// little-endian, so the raw object bytes are written as-is.
void put_u32(std::ostream& out, std::uint32_t v) {
  char buf[4];
  std::memcpy(buf, &v, 4);
  out.write(buf, 4);
}

void put_f64(std::ostream& out, double v) {
  char buf[8];
  std::memcpy(buf, &v, 8);
  out.write(buf, 8);
}

void put_field(std::ostream& out, const SpectralField& f) {
  const std::vector<double>& v = f.values();
  out.write(reinterpret_cast<const char*>(v.data()),
            std::streamsize(v.size() * sizeof(double)));
}

std::uint32_t take_u32(std::istream& in) {
  char buf[4];
  if (!in.read(buf, 4)) throw ConfigError("snapshot: truncated header");
  std::uint32_t v;
  std::memcpy(&v, buf, 4);
  return v;
}

double take_f64(std::istream& in) {
  char buf[8];
  if (!in.read(buf, 8)) throw ConfigError("snapshot: truncated header");
  double v;
  std::memcpy(&v, buf, 8);
  return v;
}

SpectralField take_field(std::istream& in, SpatialGrid g) {
  std::vector<double> v(std::size_t(g.npoints()));
  if (!in.read(reinterpret_cast<char*>(v.data()),
               std::streamsize(v.size() * sizeof(double))))
    throw ConfigError("snapshot: truncated field data");
  return SpectralField::from_values(g, std::move(v));
}

void put_header(std::ostream& out, SnapshotKind kind, int nx, int ny, int n, double time) {
  out.write(kMagic, 4);
  put_u32(out, kSnapshotVersion);
  put_u32(out, std::uint32_t(kind));
  put_u32(out, std::uint32_t(nx));
  put_u32(out, std::uint32_t(ny));
  put_u32(out, std::uint32_t(n));
  put_f64(out, time);
}

}  // namespace

void write_snapshot(std::ostream& out, const AngularState& s) {
  const SpatialGrid g = s.a[0].grid();
  put_header(out, SnapshotKind::Angular2d, g.nx, g.ny, s.n_modes(), s.time);
  put_field(out, s.a[0]);
  for (int k = 1; k <= s.n_modes(); ++k) {
    put_field(out, s.ak(k));
    put_field(out, s.bk(k));
  }
}

void write_snapshot(std::ostream& out, const GtState& s) {
  const SpatialGrid g = s.fR.grid();
  put_header(out, SnapshotKind::TwoSpeed1d, g.nx, 0, 0, s.time);
  put_field(out, s.fR);
  put_field(out, s.fL);
}

Snapshot read_snapshot(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4)) throw ConfigError("snapshot: truncated header");
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw ConfigError("snapshot: bad magic, not a snapshot file");
  const std::uint32_t version = take_u32(in);
  if (version != kSnapshotVersion)
    throw ConfigError("snapshot: unsupported format version " + std::to_string(version));
  const std::uint32_t kind = take_u32(in);
  const std::uint32_t nx = take_u32(in);
  const std::uint32_t ny = take_u32(in);
  const std::uint32_t n = take_u32(in);
  const double time = take_f64(in);

  // The grid constructor rejects inadmissible dimensions; funnel its message
  // through untouched.
  Snapshot snap;
  if (kind == std::uint32_t(SnapshotKind::Angular2d)) {
    if (ny == 0) throw ConfigError("snapshot: 2D snapshot with ny = 0");
    if (n < 1 || n > 4096)
      throw ConfigError("snapshot: bad angular truncation " + std::to_string(n));
    const int inx = int(nx), iny = int(ny);
    SpatialGrid g(inx, iny);
    AngularState s(g, int(n));
    s.time = time;
    s.a[0] = take_field(in, g);
    for (std::uint32_t k = 1; k <= n; ++k) {
      s.ak(int(k)) = take_field(in, g);
      s.bk(int(k)) = take_field(in, g);
    }
    snap.kind = SnapshotKind::Angular2d;
    snap.angular = std::move(s);
  } else if (kind == std::uint32_t(SnapshotKind::TwoSpeed1d)) {
    if (ny != 0) throw ConfigError("snapshot: 1D snapshot with ny != 0");
    if (n != 0) throw ConfigError("snapshot: 1D snapshot with a mode count");
    const int inx = int(nx);
    SpatialGrid g(inx, 0);
    GtState s(g);
    s.time = time;
    s.fR = take_field(in, g);
    s.fL = take_field(in, g);
    snap.kind = SnapshotKind::TwoSpeed1d;
    snap.two_speed = std::move(s);
  } else {
    throw ConfigError("snapshot: unknown state kind " + std::to_string(kind));
  }
  return snap;
}

}  // namespace abp
