#pragma once

#include <string>
#include <vector>

#include "topmg/density.hpp"
#include "topmg/mto.hpp"
#include "topmg/solvers.hpp"

namespace topmg {

/// Every tunable of the toolkit with the square-wall study defaults. Parsed
/// from a flat key = value file (one pair per line, # comments) and/or
/// command-line overrides.
struct RunConfig {
  int mesh_nx = 32;
  int mesh_ny = 32;
  Method method = Method::pcgmg;

  // linear solver
  double cg_tol = 1e-6;
  int cg_max = 1000;
  int max_iter = 1000000;  // stationary-method cap
  double omega = 0.6;
  int gamma = 1;
  int sweeps = 2;
  int mg_levels = 2;

  // optimization
  std::vector<double> moduli = {9.0, 3.0, 1.0, 1e-9};
  std::vector<double> volume_fractions = {0.16, 0.08, 0.08, 0.68};
  double penalty = 3.0;
  double poisson_ratio = 0.3;
  double filter_radius = 8.0;
  double filter_tol = 0.05;
  double tol = 1e-3;  // outer stopping criterion
  double move_limit = 0.2;
  double oc_damping = 0.5;
  int inner_sweeps = 1;
  bool warm_start = false;

  // poisson source term
  double source = 1.0;

  // outputs
  std::string out_dir;  // empty = $TOPOPT_OUT or "out"
  bool images = true;
  bool csv = true;

  bool operator==(const RunConfig&) const = default;

  MaterialModel material() const;
  SolverConfig solver_config() const;
  OptimConfig optim_config() const;
  std::string resolved_out_dir() const;
};

/// Parses flat key = value text. Unknown keys, unparsable values and invariant
/// violations raise ConfigError naming the line and key.
RunConfig parse_config(const std::string& text, RunConfig base = {});

RunConfig load_config_file(const std::string& path, RunConfig base = {});

/// Inverse of parse_config: emits every key so that a round trip is exact.
std::string write_config(const RunConfig& cfg);

Method parse_method(const std::string& name);  // accepts "-" or "_" spellings

/// Checks the cross-field invariants (fraction sum, phase counts, solver
/// ranges); throws ConfigError.
void validate(const RunConfig& cfg);

}  // namespace topmg
