#pragma once

#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgdg/experiments.hpp"

namespace sgdg {

/// Invalid configuration; the message names the offending section.key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parsed run configuration.
///
/// INI-style file: `[section]` headers and `key = value` lines; `#` and `;`
/// start comments. Recognised keys (all optional unless noted):
///
///   [problem]        name (required), d
///   [discretization] N, k, flux (upwind | lf)
///   [time]           T, cfl
///   [initial]        center (comma list), radius, amplitude, wave_number
///   [domain]         L, v_cut, period
///   [relaxation]     tau, theta
///   [convergence]    N_min, N_max
///   [output]         dir, series_stride, snapshot_times (comma list), snapshot_resolution
///   [parallel]       workers
///
/// Unknown sections or keys, keys that do not apply to the chosen problem and
/// malformed values are errors.
struct RunConfig {
  ProblemSetup setup;
  bool level_set = false;   // N given
  bool degree_set = false;  // k given
  std::optional<int> n_min, n_max;
  std::string output_dir = "output";
  int series_stride = 1;
  std::vector<double> snapshot_times;
  int snapshot_resolution = 64;
  int workers = 0;  // 0 keeps the runtime default
};

RunConfig parse_config(std::istream& in);
/// Throws ConfigError if the file cannot be read.
RunConfig load_config(const std::string& path);

/// Parameter completeness for `run`: N and k must be present.
void require_run_fields(const RunConfig& c);
/// Level range for `converge` and `project-study`: N_min..N_max, or N alone.
std::pair<int, int> level_range(const RunConfig& c);

}  // namespace sgdg
