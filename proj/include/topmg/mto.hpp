#pragma once

#include <vector>

#include "topmg/density.hpp"
#include "topmg/fem.hpp"
#include "topmg/grid.hpp"
#include "topmg/solvers.hpp"

namespace topmg {

struct OptimConfig {
  std::vector<double> volume_fractions;  // one per phase, summing to 1
  double filter_radius = 8.0;            // in element widths
  double filter_tol = 0.05;              // inner pair-sweep stop
  double tol = 1e-3;                     // outer max density change
  int inner_sweeps = 1;                  // OC applications per phase pair
  double move_limit = 0.2;
  double oc_damping = 0.5;
  bool warm_start = false;               // reuse previous displacement as x0
  int max_outer = 2000;
  double density_floor = 1e-3;
  SolverConfig solver;

  void validate() const;  // throws ConfigError
};

struct OptimReport {
  DensityField density;
  std::vector<double> compliance_history;
  std::vector<double> change_history;
  std::vector<int> solver_iteration_history;
  std::vector<double> seconds_history;
  int outer_iterations = 0;
  long total_solver_iterations = 0;
  double seconds = 0.0;
  bool converged = false;
};

/// Geometry, supports, loads and materials of one optimization problem.
struct Problem {
  GridLevel grid;  // finest level, 2 dofs per node
  BoundaryConditions bc;
  MaterialModel material;
};

Problem make_wall_problem(int nx, int ny, MaterialModel material);

/// Compliance derivatives dC/dalpha_{phase,element} for every phase:
/// -p alpha^(p-1) E0_phase u_e^T k_hat u_e. All entries are <= 0.
std::vector<std::vector<double>> sensitivities(const std::vector<double>& u,
                                               const DensityField& density,
                                               const MaterialModel& mat,
                                               const GridLevel& level);

/// Density-weighted sensitivity filter with cone weights of the given radius
/// for a single phase. A radius <= 1 returns the input unchanged.
std::vector<double> filter_sensitivities(const std::vector<double>& raw,
                                         const DensityField& density, int phase,
                                         double radius, const GridLevel& level);

/// Optimality-criteria update of the binary (phase_a, phase_b) sub-problem:
/// phase_a moves under its volume target, phase_b absorbs the complement, all
/// other phases stay untouched. The per-element sum alpha_a + alpha_b is
/// preserved exactly.
void oc_update_pair(DensityField& density, int phase_a, int phase_b,
                    const std::vector<double>& filtered_sens_a,
                    const std::vector<double>& filtered_sens_b,
                    double target_fraction, double move, double damping);

/// Same update with an individual move limit per element; the optimizer uses
/// this to damp elements that oscillate between sweeps.
void oc_update_pair(DensityField& density, int phase_a, int phase_b,
                    const std::vector<double>& filtered_sens_a,
                    const std::vector<double>& filtered_sens_b,
                    double target_fraction, const std::vector<double>& move,
                    double damping);

/// Alternating active-phase outer loop: assemble, solve, filter, sweep all
/// phase pairs, until the largest density change drops below cfg.tol.
OptimReport optimize(const Problem& problem, const OptimConfig& cfg);

}  // namespace topmg
