#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "topmg/mto.hpp"
#include "topmg/solvers.hpp"

namespace topmg {

struct BenchRow {
  int nx = 0;
  int ny = 0;
  std::string label;  // method name or multigrid level
  int iterations = 0;
  double seconds = 0.0;
  bool converged = false;
  std::string note;  // "no survey" for skipped cells, error text for failures
};

struct BenchMatrix {
  std::vector<BenchRow> rows;
};

struct PoissonBenchConfig {
  std::vector<int> grids = {16, 32, 64, 128, 256};  // powers of two >= 4
  std::vector<Method> methods = {Method::pcgmg, Method::cholesky,
                                 Method::gauss_seidel, Method::jacobi};
  double tol = 1e-6;
  int max_iter = 2000000;
  int cholesky_cap = 128;  // grids above this skip the direct solve
  double source = 1.0;
  double omega = 0.6;
  int sweeps = 2;
  int gamma = 1;
};

/// Solver comparison on the Poisson problem; the multigrid depth per grid is
/// chosen so the coarsest level is always 2x2. One row per (grid, method),
/// failures and skips included.
BenchMatrix run_poisson_bench(const PoissonBenchConfig& cfg);

struct WallSweepConfig {
  std::vector<std::pair<int, int>> meshes = {{32, 32}};
  std::vector<int> levels = {-1, 2};  // -1 = direct solution baseline
  MaterialModel material;
  OptimConfig optim;  // solver.method/num_coarsenings replaced per cell
};

using CellCallback =
    std::function<void(const std::string& cell_name, const OptimReport& report)>;

/// One full optimization run per (mesh, level) cell. `on_cell` receives every
/// completed report so the caller can write histories and images.
BenchMatrix run_wall_sweep(const WallSweepConfig& cfg, const CellCallback& on_cell = {});

}  // namespace topmg
