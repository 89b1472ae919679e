#include <doctest.h>

#include "topmg/bench.hpp"
#include "topmg/errors.hpp"

using namespace topmg;

TEST_CASE("poisson bench produces one row per grid and method") {
  PoissonBenchConfig cfg;
  cfg.grids = {8, 16};
  cfg.methods = {Method::pcgmg, Method::cholesky, Method::gauss_seidel, Method::jacobi};
  cfg.tol = 1e-6;
  const BenchMatrix m = run_poisson_bench(cfg);
  REQUIRE(m.rows.size() == 8);
  for (const BenchRow& r : m.rows) {
    CHECK((r.nx == 8 || r.nx == 16));
    CHECK(r.converged);
    CHECK(r.note.empty());
    CHECK(r.iterations >= 1);
  }
}

TEST_CASE("poisson bench marks skipped cholesky cells") {
  PoissonBenchConfig cfg;
  cfg.grids = {16};
  cfg.methods = {Method::cholesky};
  cfg.cholesky_cap = 8;
  const BenchMatrix m = run_poisson_bench(cfg);
  REQUIRE(m.rows.size() == 1);
  CHECK_FALSE(m.rows[0].converged);
  CHECK(m.rows[0].note == "no survey");
}

TEST_CASE("poisson bench rejects non-power-of-two grids") {
  PoissonBenchConfig cfg;
  cfg.grids = {24};
  CHECK_THROWS_AS(run_poisson_bench(cfg), ConfigError);
}

TEST_CASE("poisson bench iteration counts are deterministic across runs") {
  PoissonBenchConfig cfg;
  cfg.grids = {16, 32};
  cfg.methods = {Method::pcgmg, Method::gauss_seidel};
  const BenchMatrix a = run_poisson_bench(cfg);
  const BenchMatrix b = run_poisson_bench(cfg);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].iterations == b.rows[i].iterations);
    CHECK(a.rows[i].converged == b.rows[i].converged);
  }
}

TEST_CASE("wall sweep records every cell including failures") {
  WallSweepConfig cfg;
  cfg.meshes = {{8, 8}};
  cfg.levels = {-1, 1, 5};  // level 5 cannot coarsen an 8x8 grid
  cfg.material.phase_moduli = {9.0, 3.0, 1.0, 1e-9};
  cfg.optim.volume_fractions = {0.16, 0.08, 0.08, 0.68};
  cfg.optim.filter_radius = 2.0;
  cfg.optim.tol = 5e-3;
  cfg.optim.max_outer = 120;
  cfg.optim.solver.tol = 1e-6;

  int cells_seen = 0;
  const BenchMatrix m = run_wall_sweep(cfg, [&](const std::string& name,
                                                const OptimReport& rep) {
    ++cells_seen;
    CHECK(!name.empty());
    CHECK(rep.outer_iterations >= 1);
  });
  REQUIRE(m.rows.size() == 3);
  CHECK(m.rows[0].label == "accurate");
  CHECK(m.rows[1].label == "l = 1");
  CHECK(m.rows[2].label == "l = 5");
  CHECK_FALSE(m.rows[2].converged);       // divisibility failure recorded
  CHECK(!m.rows[2].note.empty());
  CHECK(cells_seen == 2);                 // failed cell produces no report
  CHECK(m.rows[0].iterations >= 1);
}
