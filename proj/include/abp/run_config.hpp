#pragma once

#include <iosfwd>
#include <string>

#include "abp/abp2d.hpp"
#include "abp/grid.hpp"
#include "abp/integrate.hpp"

namespace abp {

// A complete, self-describing simulation run. Serialized as flat key=value
// lines with section-prefixed keys ("model.Pe = 1.5"); '#' starts a comment,
// blank lines are skipped, later assignments win, and command-line overrides
// are just more assignments applied on top of the file.
//
// The defaults below are the document of record: a config file only has to
// name what it changes.
struct RunConfig {
  // model.*
  std::string model = "abp2d";  // abp2d | gt1d
  double Pe = 1.0;
  double De = 1.0;
  int n = 4;  // angular truncation (abp2d only)

  // grid.*
  int nx = 16;
  int ny = 16;  // forced to 0 for gt1d

  // time.*
  double T = 0.5;
  double dt = 0.0;  // 0 = policy value min(stability bound, 1e-2)
  std::string scheme = "etd-rk2";  // etd-rk2 | etd-euler
  double cfl_safety = 0.5;
  bool enforce_stability = true;

  // init.*
  std::string preset = "isotropic-uniform";  // ignored when file is set
  std::string init_file;                     // CSV sample table, overrides preset
  double mass = 0.5;        // preset mass parameter
  double theta_star = 0.0;  // aligned-dirac concentration angle
  bool mollify = false;
  double mollify_epsilon = 0.1;
  double mollify_alpha = 3.0;

  // output.*
  std::string output_dir = "out";
  double diag_cadence = 0.05;     // 0 = record every step
  double snapshot_cadence = 0.0;  // 0 = only the final state file
  // run.*
  long seed = 0;  // reserved for randomized initial data; recorded, not yet used
  std::string invariant_policy = "fail";  // fail | warn
  int threads = 0;                        // 0 = resolver default

  bool operator==(const RunConfig&) const = default;

  // Assign one key. Unknown keys and unparseable values throw ConfigError
  // naming the key.
  void set(const std::string& key, const std::string& value);
  // Cross-field admissibility (enum strings, positivity, grid/model match).
  void validate() const;

  SpatialGrid spatial_grid() const;
  AbpParams abp_params() const;                // model must be abp2d
  IntegratorConfig integrator_config() const;  // observe cadence = diag_cadence
};

// Parses a whole config stream. Malformed lines and unknown keys throw
// ConfigError with the offending key or line.
RunConfig parse_run_config(std::istream& in);

// Writes every field, shortest round-trip doubles, so that
// parse_run_config(format_run_config(c)) == c holds exactly.
void format_run_config(std::ostream& out, const RunConfig& c);

}  // namespace abp
