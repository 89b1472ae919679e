#include "topmg/mto.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "topmg/errors.hpp"

namespace topmg {

namespace {

using Clock = std::chrono::steady_clock;

double clamp(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

}  // namespace

void OptimConfig::validate() const {
  if (volume_fractions.size() < 2) {
    throw ConfigError("need at least two phases (one material plus void)");
  }
  double sum = 0.0;
  for (double v : volume_fractions) {
    if (!(v > 0.0 && v < 1.0)) {
      throw ConfigError("volume_fractions entries must lie in (0, 1), got " +
                        std::to_string(v));
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ConfigError("volume_fractions must sum to 1, got " + std::to_string(sum));
  }
  if (filter_radius < 0.0) throw ConfigError("filter_radius must be >= 0");
  if (!(filter_tol > 0.0)) throw ConfigError("filter_tol must be positive");
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (inner_sweeps < 1) throw ConfigError("inner_sweeps must be >= 1");
  if (!(move_limit > 0.0 && move_limit <= 1.0)) {
    throw ConfigError("move_limit must lie in (0, 1]");
  }
  if (!(oc_damping > 0.0 && oc_damping <= 1.0)) {
    throw ConfigError("oc_damping must lie in (0, 1]");
  }
  if (max_outer < 1) throw ConfigError("max_outer must be >= 1");
  if (!(density_floor > 0.0 && density_floor < 0.5)) {
    throw ConfigError("density_floor must lie in (0, 0.5)");
  }
  solver.validate();
}

Problem make_wall_problem(int nx, int ny, MaterialModel material) {
  material.validate();
  Problem p;
  p.grid = GridLevel{nx, ny, 2, 0};
  p.bc = wall_boundary_conditions(p.grid);
  p.material = std::move(material);
  return p;
}

std::vector<std::vector<double>> sensitivities(const std::vector<double>& u,
                                               const DensityField& density,
                                               const MaterialModel& mat,
                                               const GridLevel& level) {
  if (density.nx() != level.nx || density.ny() != level.ny) {
    throw DimensionError("sensitivities: density grid does not match level");
  }
  if (density.num_phases() != mat.num_phases()) {
    throw DimensionError("sensitivities: phase count mismatch");
  }
  const std::vector<double> energies = element_energies(level, u, mat.poisson_ratio);
  const double p = mat.penalty;
  std::vector<std::vector<double>> s(
      static_cast<std::size_t>(mat.num_phases()),
      std::vector<double>(static_cast<std::size_t>(level.element_count()), 0.0));
  for (int i = 0; i < mat.num_phases(); ++i) {
    const double e0 = mat.phase_moduli[static_cast<std::size_t>(i)];
    for (int e = 0; e < level.element_count(); ++e) {
      s[static_cast<std::size_t>(i)][static_cast<std::size_t>(e)] =
          -p * std::pow(density.at(e, i), p - 1.0) * e0 *
          energies[static_cast<std::size_t>(e)];
    }
  }
  return s;
}

std::vector<double> filter_sensitivities(const std::vector<double>& raw,
                                         const DensityField& density, int phase,
                                         double radius, const GridLevel& level) {
  if (static_cast<int>(raw.size()) != level.element_count()) {
    throw DimensionError("filter: field length does not match element count");
  }
  if (radius <= 1.0) return raw;  // only the self-weight survives

  const int reach = static_cast<int>(std::ceil(radius)) - 1;
  std::vector<double> filtered(raw.size(), 0.0);
  for (int ex = 0; ex < level.nx; ++ex) {
    for (int ey = 0; ey < level.ny; ++ey) {
      double acc = 0.0;
      double wsum = 0.0;
      for (int jx = std::max(0, ex - reach); jx <= std::min(level.nx - 1, ex + reach); ++jx) {
        for (int jy = std::max(0, ey - reach); jy <= std::min(level.ny - 1, ey + reach); ++jy) {
          const double dist = std::sqrt(double((ex - jx) * (ex - jx) +
                                               (ey - jy) * (ey - jy)));
          const double w = radius - dist;
          if (w <= 0.0) continue;
          const int j = level.element_index(jx, jy);
          acc += w * density.at(j, phase) * raw[static_cast<std::size_t>(j)];
          wsum += w;
        }
      }
      const int e = level.element_index(ex, ey);
      filtered[static_cast<std::size_t>(e)] = acc / (density.at(e, phase) * wsum);
    }
  }
  return filtered;
}

void oc_update_pair(DensityField& density, int phase_a, int phase_b,
                    const std::vector<double>& filtered_sens_a,
                    const std::vector<double>& filtered_sens_b,
                    double target_fraction, double move, double damping) {
  oc_update_pair(density, phase_a, phase_b, filtered_sens_a, filtered_sens_b,
                 target_fraction,
                 std::vector<double>(static_cast<std::size_t>(density.element_count()),
                                     move),
                 damping);
}

void oc_update_pair(DensityField& density, int phase_a, int phase_b,
                    const std::vector<double>& filtered_sens_a,
                    const std::vector<double>& filtered_sens_b,
                    double target_fraction, const std::vector<double>& move,
                    double damping) {
  if (phase_a == phase_b) throw ConfigError("oc_update_pair: phases must differ");
  const int ne = density.element_count();
  if (static_cast<int>(filtered_sens_a.size()) != ne ||
      static_cast<int>(filtered_sens_b.size()) != ne ||
      static_cast<int>(move.size()) != ne) {
    throw DimensionError("oc_update_pair: field length does not match grid");
  }
  const double eps = density.floor_eps();

  // -dC/dalpha_a along the exchange direction alpha_b = s - alpha_a; positive
  // where phase a is preferred
  std::vector<double> gain(static_cast<std::size_t>(ne));
  std::vector<double> pair_sum(static_cast<std::size_t>(ne));
  std::vector<double> lo(static_cast<std::size_t>(ne)), hi(static_cast<std::size_t>(ne));
  double max_gain = -1e300;
  double max_move = 0.0;
  for (int e = 0; e < ne; ++e) {
    gain[static_cast<std::size_t>(e)] = filtered_sens_b[static_cast<std::size_t>(e)] -
                                        filtered_sens_a[static_cast<std::size_t>(e)];
    max_gain = std::max(max_gain, gain[static_cast<std::size_t>(e)]);
    max_move = std::max(max_move, move[static_cast<std::size_t>(e)]);
    const double a = density.at(e, phase_a);
    pair_sum[static_cast<std::size_t>(e)] = a + density.at(e, phase_b);
    lo[static_cast<std::size_t>(e)] = std::max(eps, a - move[static_cast<std::size_t>(e)]);
    hi[static_cast<std::size_t>(e)] = std::min(pair_sum[static_cast<std::size_t>(e)] - eps,
                                               a + move[static_cast<std::size_t>(e)]);
  }

  std::vector<double> cand(static_cast<std::size_t>(ne));
  const double vol_tol = 1e-6;
  bool met = false;

  if (max_gain <= 0.0) {
    // no element prefers phase a over b; the multiplicative form cannot steer
    // the volume, so settle the constraint with a uniform shift
    double t_lo = -max_move, t_hi = max_move;
    for (int it = 0; it <= 100; ++it) {
      const double t = 0.5 * (t_lo + t_hi);
      double mean = 0.0;
      for (int e = 0; e < ne; ++e) {
        cand[static_cast<std::size_t>(e)] =
            clamp(density.at(e, phase_a) + t, lo[static_cast<std::size_t>(e)],
                  hi[static_cast<std::size_t>(e)]);
        mean += cand[static_cast<std::size_t>(e)];
      }
      mean /= ne;
      if (std::abs(mean - target_fraction) <= vol_tol) {
        met = true;
        break;
      }
      (mean > target_fraction ? t_hi : t_lo) = t;
    }
  } else {
    // Multiplicative OC update with the multiplier found by bisection in log
    // space. The numerator is floored at a small positive fraction of its
    // maximum: elements preferring phase b would otherwise be pinned at the
    // lower bound for every lambda, which makes the volume target unreachable
    // once they are the majority. Floored elements still shed material first
    // and absorb it last.
    const double floor_gain = 1e-4 * max_gain;
    double l_lo = 1e-10, l_hi = 1e10;
    for (int it = 0; it <= 100; ++it) {
      const double lambda = std::sqrt(l_lo * l_hi);
      double mean = 0.0;
      for (int e = 0; e < ne; ++e) {
        const double b = std::max(floor_gain, gain[static_cast<std::size_t>(e)]) / lambda;
        const double a = density.at(e, phase_a);
        cand[static_cast<std::size_t>(e)] =
            clamp(a * std::pow(b, damping), lo[static_cast<std::size_t>(e)],
                  hi[static_cast<std::size_t>(e)]);
        mean += cand[static_cast<std::size_t>(e)];
      }
      mean /= ne;
      if (std::abs(mean - target_fraction) <= vol_tol) {
        met = true;
        break;
      }
      (mean > target_fraction ? l_lo : l_hi) = lambda;
    }
  }

  if (!met) {
    throw MultiplierError("volume target " + std::to_string(target_fraction) +
                          " for phase " + std::to_string(phase_a + 1) +
                          " is unreachable under the current bounds");
  }

  for (int e = 0; e < ne; ++e) {
    density.at(e, phase_a) = cand[static_cast<std::size_t>(e)];
    density.at(e, phase_b) = pair_sum[static_cast<std::size_t>(e)] -
                             cand[static_cast<std::size_t>(e)];
  }
}

OptimReport optimize(const Problem& problem, const OptimConfig& cfg) {
  cfg.validate();
  problem.material.validate();
  const GridLevel& grid = problem.grid;
  if (grid.dofs_per_node != 2) {
    throw ConfigError("optimization runs on the elasticity grid (2 dofs per node)");
  }
  const int num_phases = problem.material.num_phases();
  if (static_cast<int>(cfg.volume_fractions.size()) != num_phases) {
    throw ConfigError("volume fraction count " +
                      std::to_string(cfg.volume_fractions.size()) +
                      " does not match phase count " + std::to_string(num_phases));
  }
  problem.bc.validate(grid.dof_count());

  const auto t_start = Clock::now();
  OptimReport rep;
  rep.density = DensityField::uniform(grid.nx, grid.ny, cfg.volume_fractions,
                                      cfg.density_floor);

  GridHierarchy hierarchy;
  const bool use_mg = cfg.solver.method == Method::pcgmg;
  if (use_mg) {
    hierarchy = build_hierarchy(grid.nx, grid.ny, cfg.solver.num_coarsenings, 2);
  }

  // Per-element move limits, halved whenever an element's update direction
  // reverses between sweeps and slowly regrown on consistent moves. A fixed
  // move limit leaves a large population of elements trading phase identity
  // at full amplitude forever, so the density change never falls below tol.
  const int ne = grid.element_count();
  std::vector<double> move_limits(static_cast<std::size_t>(ne), cfg.move_limit);
  std::vector<double> last_delta(static_cast<std::size_t>(ne) * num_phases, 0.0);

  std::vector<double> u;
  for (int outer = 1; outer <= cfg.max_outer; ++outer) {
    const auto t_iter = Clock::now();

    const LinearSystem sys = assemble_elasticity(grid, rep.density, problem.material,
                                                 problem.bc);
    SolveReport solve;
    const std::vector<double>* x0 =
        (cfg.warm_start && !u.empty()) ? &u : nullptr;
    switch (cfg.solver.method) {
      case Method::cholesky:
        solve = cholesky_solve_system(sys.matrix, sys.rhs);
        break;
      case Method::cg:
        solve = cg_solve(sys.matrix, sys.rhs, cfg.solver.tol, cfg.solver.max_iter, x0);
        break;
      case Method::pcgmg: {
        MultigridOperators ops =
            build_multigrid_operators(hierarchy, sys.matrix, cfg.solver.omega);
        solve = pcgmg_solve(ops, sys.rhs, cfg.solver, x0);
        break;
      }
      case Method::jacobi:
        solve = stationary_solve(sys.matrix, sys.rhs, SmootherKind::jacobi,
                                 cfg.solver.omega, cfg.solver.tol, cfg.solver.max_iter);
        break;
      case Method::damped_jacobi:
        solve = stationary_solve(sys.matrix, sys.rhs, SmootherKind::damped_jacobi,
                                 cfg.solver.omega, cfg.solver.tol, cfg.solver.max_iter);
        break;
      case Method::gauss_seidel:
        solve = stationary_solve(sys.matrix, sys.rhs, SmootherKind::gauss_seidel,
                                 cfg.solver.omega, cfg.solver.tol, cfg.solver.max_iter);
        break;
    }
    u = std::move(solve.solution);

    rep.compliance_history.push_back(compliance(sys.matrix, u));
    rep.solver_iteration_history.push_back(solve.iterations);
    rep.total_solver_iterations += solve.iterations;

    const std::vector<std::vector<double>> raw =
        sensitivities(u, rep.density, problem.material, grid);
    std::vector<std::vector<double>> filtered(static_cast<std::size_t>(num_phases));
    for (int i = 0; i < num_phases; ++i) {
      filtered[static_cast<std::size_t>(i)] = filter_sensitivities(
          raw[static_cast<std::size_t>(i)], rep.density, i, cfg.filter_radius, grid);
    }

    const DensityField before = rep.density;
    for (int a = 0; a < num_phases - 1; ++a) {
      for (int b = a + 1; b < num_phases; ++b) {
        for (int sweep = 0; sweep < cfg.inner_sweeps; ++sweep) {
          const DensityField pre_sweep = rep.density;
          oc_update_pair(rep.density, a, b, filtered[static_cast<std::size_t>(a)],
                         filtered[static_cast<std::size_t>(b)],
                         cfg.volume_fractions[static_cast<std::size_t>(a)],
                         move_limits, cfg.oc_damping);
          if (DensityField::max_change(rep.density, pre_sweep) <= cfg.filter_tol) break;
        }
      }
    }

    for (int e = 0; e < ne; ++e) {
      bool flipped = false, moved = false;
      for (int i = 0; i < num_phases; ++i) {
        const double delta = rep.density.at(e, i) - before.at(e, i);
        double& last = last_delta[static_cast<std::size_t>(e) * num_phases + i];
        if (std::abs(delta) > 1e-12) moved = true;
        if (delta * last < -1e-12) flipped = true;
        last = delta;
      }
      double& mv = move_limits[static_cast<std::size_t>(e)];
      if (flipped) {
        mv = std::max(1e-4, 0.5 * mv);
      } else if (moved) {
        mv = std::min(cfg.move_limit, 1.05 * mv);
      }
    }

    const double change = DensityField::max_change(rep.density, before);
    rep.change_history.push_back(change);
    rep.seconds_history.push_back(std::chrono::duration<double>(Clock::now() - t_iter).count());
    rep.outer_iterations = outer;
    if (change <= cfg.tol) {
      rep.converged = true;
      break;
    }
  }
  rep.seconds = std::chrono::duration<double>(Clock::now() - t_start).count();
  return rep;
}

}  // namespace topmg
