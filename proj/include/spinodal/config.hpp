#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "spinodal/ch_solver.hpp"
#include "spinodal/field.hpp"

namespace spinodal {

struct InitConfig {
  double mean = 0.48;      ///< Ti fraction
  double variance = 1e-3;
  std::uint64_t seed = 1;
};

struct AnalysisConfig {
  double threshold = 0.5;  ///< TiRich where x >= threshold
  double contrast = 1e-4;  ///< sigma_Al / sigma_Ti
};

/// INI-style run description:
///
///   [grid]     nx, ny, h
///   [init]     mean, variance, seed
///   [solver]   D, kappa, dt (number or "auto"), n_steps, snapshot_times, diag_stride
///   [analysis] threshold, contrast
///   [paths]    out
///
/// Unknown sections or keys are rejected.
struct RunConfig {
  GridSpec grid;
  InitConfig init;
  SolverParams solver;
  AnalysisConfig analysis;
  std::string out_dir = "out";
};

/// Parse error naming the line and dotted key, e.g. "line 3: solver.dt: ...".
class ConfigError : public DataError {
public:
  ConfigError(int line, std::string key, const std::string& msg);
  int line() const { return line_; }
  const std::string& key() const { return key_; }

private:
  int line_;
  std::string key_;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

}  // namespace spinodal
