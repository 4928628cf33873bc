#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "abp/abp2d.hpp"
#include "abp/gt1d.hpp"

namespace abp {

// Binary state snapshot. Layout, all little-endian:
//
//   char[4]  magic "ABPS"
//   u32      format version (currently 1)
//   u32      kind: 0 = angular 2D state, 1 = two-speed 1D state
//   u32      nx
//   u32      ny          (0 for the 1D state)
//   u32      n           (angular truncation; 0 for the 1D state)
//   f64      time
//   f64[]    row-major collocation values, one block per mode field:
//            a_0, a_1, b_1, ..., a_n, b_n for kind 0; fR, fL for kind 1.
//
// Values are the exact collocation doubles of the state, so a read-back
// followed by a write produces an identical byte stream. Several snapshots
// may be concatenated in one stream; read_snapshot consumes exactly one.
inline constexpr std::uint32_t kSnapshotVersion = 1;

enum class SnapshotKind : std::uint32_t { Angular2d = 0, TwoSpeed1d = 1 };

void write_snapshot(std::ostream& out, const AngularState& s);
void write_snapshot(std::ostream& out, const GtState& s);

// Exactly one of the two payloads is engaged, matching kind.
struct Snapshot {
  SnapshotKind kind = SnapshotKind::Angular2d;
  std::optional<AngularState> angular;
  std::optional<GtState> two_speed;
};

// Throws ConfigError on a bad magic, an unsupported version, an unknown
// kind, inadmissible grid dimensions, or a truncated stream.
Snapshot read_snapshot(std::istream& in);

}  // namespace abp
