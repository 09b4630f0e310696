#pragma once

// Plain key-value run configuration: one `key = value` per line, `#`
// comments, `[section]` headers. Unknown keys are errors, duplicates are
// errors naming both lines, numeric fields are validated with line
// positions.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bispec/core.hpp"

namespace bispec {

enum class Command {
  constants,
  smallness,
  spectrum,
  resolvent_sweep,
  identities,
  full_report,
};

std::string command_name(Command c);

struct PotentialSpec {
  std::string kind = "none";  // none|rellich|bump|step|sampled
  cplx alpha{0.0, 0.0};
  cplx height{0.0, 0.0};
  double center = 0.0;
  double width = 1.0;
  double radius = 1.0;
  std::string file;  // sampled: one complex value per line, n lines
};

struct RunConfig {
  Command command = Command::full_report;
  int d = 5;
  int n = 1000;
  double R = 10.0;
  bool r_doubling = true;
  unsigned seed = 42;
  std::string out_dir = "reports";
  PotentialSpec potential;
  // z grid: explicit points, or log-polar (rho_min, rho_max, nr, angles)
  std::vector<cplx> z_points;
  double delta = 1.0;
  // tolerance overrides
  double wrn_tol = 1e-6;
  double dist_tol = 1e-3;
  double drift_factor = 1.5;
};

// Throws ConfigError with line/field positions on any malformed input.
RunConfig parse_config(std::string_view text);

// "a", "bi", "a+bi", "a-bi" with decimal/scientific parts.
cplx parse_complex(std::string_view s);

// Materialize the potential (loads the sampled file against `grid` when
// kind = sampled). Throws ConfigError / IoError.
Potential build_potential(const PotentialSpec& spec, GridPtr grid);

}  // namespace bispec
