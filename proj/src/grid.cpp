#include "abp/grid.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "abp/errors.hpp"

namespace abp {

SpatialGrid::SpatialGrid(int nx_, int ny_) : nx(nx_), ny(ny_) {
  if (nx < 4 || nx % 2 != 0)
    throw ConfigError("grid nx must be even and >= 4, got " + std::to_string(nx));
  if (ny != 0 && (ny < 4 || ny % 2 != 0))
    throw ConfigError("grid ny must be 0 (1D) or even and >= 4, got " + std::to_string(ny));
}

namespace {

std::unique_ptr<AxisTables> build_tables(int n) {
  auto t = std::make_unique<AxisTables>();
  t->n = n;
  t->h = n / 2;
  t->cosv.resize(std::size_t(t->h + 1) * n);
  t->sinv.resize(std::size_t(t->h + 1) * n);
  for (int r = 0; r <= t->h; ++r) {
    double* cr = t->cosv.data() + std::size_t(r) * n;
    double* sr = t->sinv.data() + std::size_t(r) * n;
    for (int i = 0; i < n; ++i) {
      long idx = (long(r) * i) % n;
      double ang = kTwoPi * double(idx) / double(n);
      cr[i] = std::cos(ang);
      sr[i] = std::sin(ang);
    }
  }
  return t;
}

}  // namespace

const AxisTables& axis_tables(int npoints) {
  if (npoints < 2 || npoints % 2 != 0)
    throw ConfigError("axis tables need an even point count >= 2, got " +
                      std::to_string(npoints));
  static std::mutex mu;
  static std::map<int, std::unique_ptr<AxisTables>> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto& slot = cache[npoints];
  if (!slot) slot = build_tables(npoints);
  return *slot;
}

}  // namespace abp
