#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "topmg/bench.hpp"
#include "topmg/config.hpp"
#include "topmg/errors.hpp"
#include "topmg/fem.hpp"
#include "topmg/mto.hpp"
#include "topmg/report.hpp"
#include "topmg/solvers.hpp"

namespace {

using namespace topmg;

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, ',')) {
    out.push_back(std::stoi(item));
  }
  return out;
}

// "accurate" maps to -1, numbers to multigrid depths
std::vector<int> parse_level_list(const std::string& s) {
  std::vector<int> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, ',')) {
    if (item == "accurate") {
      out.push_back(-1);
    } else {
      out.push_back(std::stoi(item));
    }
  }
  return out;
}

void parse_mesh_arg(const std::string& s, int& nx, int& ny) {
  const std::size_t x = s.find('x');
  if (x == std::string::npos) {
    throw ConfigError("--mesh expects NXxNY, got '" + s + "'");
  }
  nx = std::stoi(s.substr(0, x));
  ny = std::stoi(s.substr(x + 1));
}

int run_solve(const RunConfig& cfg, const std::string& problem, double tol,
              int mg_levels) {
  SolveReport rep;
  if (problem == "poisson") {
    const GridLevel level{cfg.mesh_nx, cfg.mesh_ny, 1, 0};
    const LinearSystem sys = assemble_poisson(level, cfg.source);
    switch (cfg.method) {
      case Method::cholesky:
        rep = cholesky_solve_system(sys.matrix, sys.rhs);
        break;
      case Method::cg:
        rep = cg_solve(sys.matrix, sys.rhs, tol, cfg.max_iter);
        break;
      case Method::pcgmg: {
        const GridHierarchy hier = build_hierarchy(cfg.mesh_nx, cfg.mesh_ny, mg_levels, 1);
        const MultigridOperators ops =
            build_multigrid_operators(hier, sys.matrix, cfg.omega);
        SolverConfig sc = cfg.solver_config();
        sc.tol = tol;
        sc.num_coarsenings = mg_levels;
        rep = pcgmg_solve(ops, sys.rhs, sc);
        break;
      }
      default: {
        const SmootherKind kind = cfg.method == Method::jacobi ? SmootherKind::jacobi
                                  : cfg.method == Method::damped_jacobi
                                      ? SmootherKind::damped_jacobi
                                      : SmootherKind::gauss_seidel;
        rep = stationary_solve(sys.matrix, sys.rhs, kind, cfg.omega, tol, cfg.max_iter);
        break;
      }
    }
  } else if (problem == "wall") {
    const GridLevel level{cfg.mesh_nx, cfg.mesh_ny, 2, 0};
    const DensityField density = DensityField::uniform(cfg.mesh_nx, cfg.mesh_ny,
                                                       cfg.volume_fractions);
    const LinearSystem sys = assemble_elasticity(level, density, cfg.material(),
                                                 wall_boundary_conditions(level));
    switch (cfg.method) {
      case Method::cholesky:
        rep = cholesky_solve_system(sys.matrix, sys.rhs);
        break;
      case Method::cg:
        rep = cg_solve(sys.matrix, sys.rhs, tol, cfg.max_iter);
        break;
      case Method::pcgmg: {
        const GridHierarchy hier = build_hierarchy(cfg.mesh_nx, cfg.mesh_ny, mg_levels, 2);
        const MultigridOperators ops =
            build_multigrid_operators(hier, sys.matrix, cfg.omega);
        SolverConfig sc = cfg.solver_config();
        sc.tol = tol;
        sc.num_coarsenings = mg_levels;
        rep = pcgmg_solve(ops, sys.rhs, sc);
        break;
      }
      default: {
        const SmootherKind kind = cfg.method == Method::jacobi ? SmootherKind::jacobi
                                  : cfg.method == Method::damped_jacobi
                                      ? SmootherKind::damped_jacobi
                                      : SmootherKind::gauss_seidel;
        rep = stationary_solve(sys.matrix, sys.rhs, kind, cfg.omega, tol, cfg.max_iter);
        break;
      }
    }
  } else {
    throw ConfigError("--problem must be poisson or wall, got '" + problem + "'");
  }

  std::printf("method %s on %dx%d %s: iterations %d, relative residual %.3e, "
              "converged %s, %.3f s\n",
              method_name(cfg.method).c_str(), cfg.mesh_nx, cfg.mesh_ny,
              problem.c_str(), rep.iterations, rep.final_residual,
              rep.converged ? "yes" : "no", rep.seconds);
  if (cfg.csv) {
    const std::string dir = cfg.resolved_out_dir();
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "'");
    write_residual_csv(rep, dir + "/residuals.csv");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structured-grid multigrid solvers and multi-material topology "
               "optimization"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_flag;
  app.add_option("--config", config_path, "flat key = value configuration file");
  app.add_option("--out", out_flag, "output directory (default $TOPOPT_OUT or ./out)");

  // poisson-bench
  CLI::App* bench_cmd = app.add_subcommand("poisson-bench",
                                           "solver comparison on the Poisson problem");
  std::string grids_arg = "16,32,64,128,256";
  double bench_tol = 1e-6;
  int bench_max_iter = 2000000;
  int chol_cap = 128;
  bench_cmd->add_option("--grids", grids_arg, "comma-separated square grid sizes");
  bench_cmd->add_option("--tol", bench_tol, "relative residual tolerance");
  bench_cmd->add_option("--max-iter", bench_max_iter, "iteration cap");
  bench_cmd->add_option("--chol-cap", chol_cap, "largest grid for the direct solve");

  // wall
  CLI::App* wall_cmd = app.add_subcommand("wall",
                                          "square-wall multi-material optimization sweep");
  std::string wall_mesh, wall_levels = "accurate,2";
  wall_cmd->add_option("--mesh", wall_mesh, "element grid, e.g. 32x32");
  wall_cmd->add_option("--levels", wall_levels,
                       "comma list of multigrid depths and/or 'accurate'");

  // solve
  CLI::App* solve_cmd = app.add_subcommand("solve", "one linear solve");
  std::string solve_mesh, solve_method, solve_problem = "poisson";
  double solve_tol = -1.0;
  int solve_mg_levels = -1;
  solve_cmd->add_option("--mesh", solve_mesh, "element grid, e.g. 64x64");
  solve_cmd->add_option("--method", solve_method,
                        "cholesky|jacobi|damped-jacobi|gauss-seidel|cg|pcgmg");
  solve_cmd->add_option("--problem", solve_problem, "poisson|wall");
  solve_cmd->add_option("--tol", solve_tol, "relative residual tolerance");
  solve_cmd->add_option("--mg-levels", solve_mg_levels, "multigrid coarsening depth");

  // shared numeric overrides
  double omega_flag = -1.0;
  int sweeps_flag = -1, gamma_flag = -1, max_iter_flag = -1;
  for (CLI::App* cmd : {bench_cmd, wall_cmd, solve_cmd}) {
    cmd->add_option("--omega", omega_flag, "damped-Jacobi weight");
    cmd->add_option("--sweeps", sweeps_flag, "pre/post smoothing sweeps");
    cmd->add_option("--gamma", gamma_flag, "cycle type: 1 = V, 2 = W");
  }
  solve_cmd->add_option("--max-iter", max_iter_flag, "iteration cap");
  double wall_tol = -1.0, wall_cgtol = -1.0;
  int wall_cg_max = -1;
  wall_cmd->add_option("--tol", wall_tol, "outer density-change tolerance");
  wall_cmd->add_option("--cgtol", wall_cgtol, "linear solver tolerance");
  wall_cmd->add_option("--cg-max", wall_cg_max, "linear solver iteration cap");

  try {
    app.parse(argc, argv);

    RunConfig cfg;
    if (!config_path.empty()) cfg = load_config_file(config_path);
    if (!out_flag.empty()) cfg.out_dir = out_flag;
    if (omega_flag > 0.0) cfg.omega = omega_flag;
    if (sweeps_flag >= 0) cfg.sweeps = sweeps_flag;
    if (gamma_flag > 0) cfg.gamma = gamma_flag;
    if (max_iter_flag > 0) cfg.max_iter = max_iter_flag;
    validate(cfg);

    if (app.got_subcommand(bench_cmd)) {
      PoissonBenchConfig pb;
      pb.grids = parse_int_list(grids_arg);
      pb.tol = bench_tol;
      pb.max_iter = bench_max_iter;
      pb.cholesky_cap = chol_cap;
      pb.source = cfg.source;
      pb.omega = cfg.omega;
      pb.sweeps = cfg.sweeps;
      pb.gamma = cfg.gamma;
      const BenchMatrix table = run_poisson_bench(pb);
      const std::string dir = cfg.resolved_out_dir();
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      if (ec) throw IoError("cannot create output directory '" + dir + "'");
      write_table_md(table, dir + "/table.md");
      std::cout << table_markdown(table);
      return 0;
    }

    if (app.got_subcommand(wall_cmd)) {
      if (!wall_mesh.empty()) parse_mesh_arg(wall_mesh, cfg.mesh_nx, cfg.mesh_ny);
      if (wall_tol > 0.0) cfg.tol = wall_tol;
      if (wall_cgtol > 0.0) cfg.cg_tol = wall_cgtol;
      if (wall_cg_max > 0) cfg.cg_max = wall_cg_max;
      validate(cfg);

      WallSweepConfig ws;
      ws.meshes = {{cfg.mesh_nx, cfg.mesh_ny}};
      ws.levels = parse_level_list(wall_levels);
      ws.material = cfg.material();
      ws.optim = cfg.optim_config();
      const std::string dir = cfg.resolved_out_dir();
      const BenchMatrix table = run_wall_sweep(ws, [&](const std::string& cell,
                                                       const OptimReport& rep) {
        emit_outputs(rep, dir + "/" + cell, cfg.images, cfg.csv);
        std::printf("%s: %d outer iterations, compliance %.6g, %.2f s\n", cell.c_str(),
                    rep.outer_iterations, rep.compliance_history.back(), rep.seconds);
      });
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      if (ec) throw IoError("cannot create output directory '" + dir + "'");
      write_table_md(table, dir + "/table.md");
      std::cout << table_markdown(table);
      return 0;
    }

    // solve
    if (!solve_mesh.empty()) parse_mesh_arg(solve_mesh, cfg.mesh_nx, cfg.mesh_ny);
    if (!solve_method.empty()) cfg.method = parse_method(solve_method);
    if (solve_mg_levels >= 0) cfg.mg_levels = solve_mg_levels;
    validate(cfg);
    const double tol = solve_tol > 0.0 ? solve_tol : cfg.cg_tol;
    return run_solve(cfg, solve_problem, tol, cfg.mg_levels);

  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 1;
  } catch (const DimensionError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 1;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
