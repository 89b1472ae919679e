#include "topmg/bench.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "topmg/errors.hpp"
#include "topmg/fem.hpp"

namespace topmg {

namespace {

using Clock = std::chrono::steady_clock;

// coarsenings that end on a 2x2 grid
int full_depth(int grid) {
  int depth = 0;
  while (grid > 2) {
    grid /= 2;
    ++depth;
  }
  return depth;
}

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

BenchMatrix run_poisson_bench(const PoissonBenchConfig& cfg) {
  for (int g : cfg.grids) {
    if (!is_power_of_two(g) || g < 4) {
      throw ConfigError("poisson bench grids must be powers of two >= 4, got " +
                        std::to_string(g));
    }
  }

  BenchMatrix out;
  for (int g : cfg.grids) {
    const GridLevel level{g, g, 1, 0};
    const LinearSystem sys = assemble_poisson(level, cfg.source);

    for (Method m : cfg.methods) {
      BenchRow row;
      row.nx = g;
      row.ny = g;
      row.label = method_name(m);
      try {
        switch (m) {
          case Method::cholesky: {
            if (g > cfg.cholesky_cap) {
              row.note = "no survey";
              break;
            }
            const SolveReport rep = cholesky_solve_system(sys.matrix, sys.rhs);
            row.iterations = rep.iterations;
            row.seconds = rep.seconds;
            row.converged = rep.converged;
            break;
          }
          case Method::cg: {
            const SolveReport rep = cg_solve(sys.matrix, sys.rhs, cfg.tol, cfg.max_iter);
            row.iterations = rep.iterations;
            row.seconds = rep.seconds;
            row.converged = rep.converged;
            break;
          }
          case Method::pcgmg: {
            const auto t0 = Clock::now();
            const GridHierarchy hier = build_hierarchy(g, g, full_depth(g), 1);
            const MultigridOperators ops =
                build_multigrid_operators(hier, sys.matrix, cfg.omega);
            SolverConfig sc;
            sc.method = Method::pcgmg;
            sc.tol = cfg.tol;
            sc.max_iter = cfg.max_iter;
            sc.omega = cfg.omega;
            sc.gamma = cfg.gamma;
            sc.pre_sweeps = cfg.sweeps;
            sc.post_sweeps = cfg.sweeps;
            sc.num_coarsenings = full_depth(g);
            const SolveReport rep = pcgmg_solve(ops, sys.rhs, sc);
            row.iterations = rep.iterations;
            row.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
            row.converged = rep.converged;
            break;
          }
          case Method::jacobi:
          case Method::damped_jacobi:
          case Method::gauss_seidel: {
            const SmootherKind kind = m == Method::jacobi ? SmootherKind::jacobi
                                      : m == Method::damped_jacobi
                                          ? SmootherKind::damped_jacobi
                                          : SmootherKind::gauss_seidel;
            const SolveReport rep = stationary_solve(sys.matrix, sys.rhs, kind,
                                                     cfg.omega, cfg.tol, cfg.max_iter);
            row.iterations = rep.iterations;
            row.seconds = rep.seconds;
            row.converged = rep.converged;
            break;
          }
        }
      } catch (const std::exception& e) {
        row.converged = false;
        row.note = e.what();
      }
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

BenchMatrix run_wall_sweep(const WallSweepConfig& cfg, const CellCallback& on_cell) {
  BenchMatrix out;
  for (const auto& [nx, ny] : cfg.meshes) {
    for (int level : cfg.levels) {
      BenchRow row;
      row.nx = nx;
      row.ny = ny;
      row.label = level < 0 ? "accurate" : ("l = " + std::to_string(level));
      try {
        OptimConfig oc = cfg.optim;
        if (level < 0) {
          oc.solver.method = Method::cholesky;
        } else {
          oc.solver.method = Method::pcgmg;
          oc.solver.num_coarsenings = level;
        }
        const Problem problem = make_wall_problem(nx, ny, cfg.material);
        const OptimReport rep = optimize(problem, oc);
        row.iterations = rep.outer_iterations;
        row.seconds = rep.seconds;
        row.converged = rep.converged;
        if (on_cell) {
          const std::string cell = std::to_string(nx) + "x" + std::to_string(ny) + "_" +
                                   (level < 0 ? "accurate" : "l" + std::to_string(level));
          on_cell(cell, rep);
        }
      } catch (const std::exception& e) {
        row.converged = false;
        row.note = e.what();
      }
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

}  // namespace topmg
