#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace abp {

// One verification check. pass is the authoritative verdict; measured and
// bound are the numbers behind it. For error-style checks the bound is an
// upper limit on measured; for order and ratio checks it is the allowed
// half-width around the nominal value (2 for convergence orders, 4 for
// snapshot-halving ratios); for margin checks measured must stay above it.
struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
};

// Named suites: "linear-exact" (closed-form decay, kernel identities),
// "invariants" (mass, admissible region, energy envelope, determinism),
// "duhamel" (integral-equation reconstruction, time-stepping order),
// "smoothing" (rough-data runs, mollifier contract), and "all", which runs
// the four in that order. Unknown names throw ConfigError. Every tolerance
// is pinned inside the checks; suites take no parameters.
std::vector<CheckResult> verify_suite(const std::string& suite);
std::vector<std::string> verify_suite_names();

// One line per check: name, PASS/FAIL, measured value, bound.
void print_checks(std::ostream& out, const std::vector<CheckResult>& checks);

}  // namespace abp
