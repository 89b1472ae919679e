#include <doctest.h>

#include <cmath>
#include <vector>

#include "topmg/density.hpp"
#include "topmg/errors.hpp"
#include "topmg/fem.hpp"
#include "topmg/solvers.hpp"

#include "oracles.hpp"

using namespace topmg;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("element stiffness matches the closed-form matrix") {
  const ElementMatrix k = element_stiffness(1.0, 0.3);
  CHECK(k[0] == doctest::Approx(0.45 / 0.91).epsilon(1e-13));

  const std::vector<double> ref = oracle::closed_form_q4(1.0, 0.3);
  for (int i = 0; i < 64; ++i) {
    CHECK(k[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  }

  // a second Poisson ratio, same oracle
  const ElementMatrix k2 = element_stiffness(1.0, 0.42);
  const std::vector<double> ref2 = oracle::closed_form_q4(1.0, 0.42);
  for (int i = 0; i < 64; ++i) {
    CHECK(k2[i] == doctest::Approx(ref2[i]).epsilon(1e-12));
  }
}

TEST_CASE("element stiffness is linear in the modulus and symmetric") {
  const ElementMatrix k1 = element_stiffness(1.0, 0.3);
  const ElementMatrix k2 = element_stiffness(2.0, 0.3);
  for (int i = 0; i < 64; ++i) {
    CHECK(k2[i] == doctest::Approx(2.0 * k1[i]).epsilon(1e-14));
  }
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      CHECK(k1[i * 8 + j] == k1[j * 8 + i]);
    }
  }
}

TEST_CASE("rigid translation produces zero element forces") {
  for (double nu : {0.1, 0.3, 0.45}) {
    const ElementMatrix k = element_stiffness(2.5, nu);
    for (int c = 0; c < 2; ++c) {
      for (int i = 0; i < 8; ++i) {
        double s = 0.0;
        for (int node = 0; node < 4; ++node) s += k[i * 8 + 2 * node + c];
        CHECK(std::abs(s) < 1e-12);
      }
    }
  }
}

TEST_CASE("one-element assembly scatters the element matrix") {
  const GridLevel level{1, 1, 2, 0};
  MaterialModel mat;
  mat.phase_moduli = {9.0, 3.0, 1.0, 1e-9};
  mat.penalty = 3.0;

  DensityField d(1, 1, 4);
  d.at(0, 0) = 1.0;
  for (int i = 1; i < 4; ++i) d.at(0, i) = 1e-3;

  const LinearSystem sys = assemble_elasticity(level, d, mat, {});
  const double e_eff = effective_modulus(d, 0, mat);
  CHECK(e_eff == doctest::Approx(9.0).epsilon(1e-6));

  const ElementMatrix k = element_stiffness(e_eff, mat.poisson_ratio);
  const std::array<int, 8> dofs = element_dofs(level, 0, 0);
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      CHECK(sys.matrix.value_at(dofs[a], dofs[b]) ==
            doctest::Approx(k[a * 8 + b]).epsilon(1e-14));
    }
  }
}

TEST_CASE("two-element assembly adds contributions on the shared edge") {
  const GridLevel level{2, 1, 2, 0};
  const std::vector<double> moduli = {1.0, 1.0};
  const LinearSystem sys = assemble_from_moduli(level, moduli, 0.3, {});
  const ElementMatrix k = element_stiffness(1.0, 0.3);

  // the two shared nodes are (1,0) and (1,1): local node 1 of the left
  // element and local node 0 of the right element, etc.
  // node (1,0) is local node 1 of the left element (u-dof 2) and local node 0
  // of the right element (u-dof 0)
  const int shared = level.node_index(1, 0);
  const double diag = sys.matrix.value_at(2 * shared, 2 * shared);
  CHECK(diag == doctest::Approx(k[2 * 8 + 2] + k[0]).epsilon(1e-13));

  CHECK(sys.matrix.is_symmetric());
  CHECK(sys.matrix.size() == 12);
}

TEST_CASE("assembly is additive in the element moduli") {
  const GridLevel level{3, 2, 2, 0};
  oracle::Rng rng(7);
  std::vector<double> ea(6), eb(6), esum(6);
  for (int i = 0; i < 6; ++i) {
    ea[i] = rng.uniform(0.1, 2.0);
    eb[i] = rng.uniform(0.1, 2.0);
    esum[i] = ea[i] + eb[i];
  }
  const LinearSystem a = assemble_from_moduli(level, ea, 0.3, {});
  const LinearSystem b = assemble_from_moduli(level, eb, 0.3, {});
  const LinearSystem s = assemble_from_moduli(level, esum, 0.3, {});
  for (int i = 0; i < s.matrix.size(); ++i) {
    for (int j = 0; j < s.matrix.size(); ++j) {
      CHECK(std::abs(s.matrix.value_at(i, j) -
                     (a.matrix.value_at(i, j) + b.matrix.value_at(i, j))) < 1e-12);
    }
  }
}

TEST_CASE("fixed dofs become unit rows with zeroed loads") {
  const GridLevel level{2, 2, 2, 0};
  BoundaryConditions bc;
  bc.fixed_dofs = {0, 1, 5};
  bc.point_loads = {{8, -1.0}};
  const std::vector<double> moduli(4, 1.0);
  const LinearSystem sys = assemble_from_moduli(level, moduli, 0.3, bc);

  for (int fixed : bc.fixed_dofs) {
    for (int j = 0; j < sys.matrix.size(); ++j) {
      const double expected = (j == fixed) ? 1.0 : 0.0;
      CHECK(sys.matrix.value_at(fixed, j) == expected);
      CHECK(sys.matrix.value_at(j, fixed) == expected);
    }
    CHECK(sys.rhs[fixed] == 0.0);
  }
  CHECK(sys.rhs[8] == -1.0);
  CHECK(sys.matrix.is_symmetric());
}

TEST_CASE("boundary conditions validate dof ranges and load placement") {
  BoundaryConditions bc;
  bc.fixed_dofs = {3};
  bc.point_loads = {{3, 1.0}};
  CHECK_THROWS_AS(bc.validate(8), ConfigError);
  bc.point_loads = {{11, 1.0}};
  CHECK_THROWS_AS(bc.validate(8), ConfigError);
}

TEST_CASE("all-void density still assembles and factors") {
  const GridLevel level{4, 4, 2, 0};
  MaterialModel mat;
  mat.phase_moduli = {9.0, 3.0, 1.0, 1e-9};
  DensityField d(4, 4, 4);
  for (int e = 0; e < 16; ++e) {
    for (int i = 0; i < 3; ++i) d.at(e, i) = 1e-3;
    d.at(e, 3) = 1.0 - 3e-3;
  }
  const LinearSystem sys = assemble_elasticity(level, d, mat,
                                               wall_boundary_conditions(level));
  CHECK_NOTHROW(CholeskyFactor::factor(sys.matrix));
}

TEST_CASE("poisson interior stencil is the Q4 Laplacian") {
  const GridLevel level{4, 4, 1, 0};
  const LinearSystem sys = assemble_poisson(level, 0.0);
  const int center = level.node_index(2, 2);
  CHECK(sys.matrix.value_at(center, center) == doctest::Approx(8.0 / 3.0).epsilon(1e-13));
  for (int dx = -1; dx <= 1; ++dx) {
    for (int dy = -1; dy <= 1; ++dy) {
      if (dx == 0 && dy == 0) continue;
      const int nbr = level.node_index(2 + dx, 2 + dy);
      CHECK(sys.matrix.value_at(center, nbr) ==
            doctest::Approx(-1.0 / 3.0).epsilon(1e-13));
    }
  }

  // element matrix against its closed form
  const std::vector<double> ref = oracle::closed_form_q4_laplace();
  const GridLevel one{1, 1, 1, 0};
  const LinearSystem single = assemble_poisson(one, 0.0);
  // all four nodes of the single element are boundary nodes here, so check
  // the stencil through a 2x2 grid interior node instead
  const GridLevel two{2, 2, 1, 0};
  const LinearSystem mid = assemble_poisson(two, 0.0);
  const int c = two.node_index(1, 1);
  CHECK(mid.matrix.value_at(c, c) == doctest::Approx(4.0 * ref[0]).epsilon(1e-13));
  (void)single;
}

TEST_CASE("zero source gives the zero solution") {
  const GridLevel level{8, 8, 1, 0};
  const LinearSystem sys = assemble_poisson(level, 0.0);
  for (double v : sys.rhs) CHECK(v == 0.0);
  const SolveReport rep = cholesky_solve_system(sys.matrix, sys.rhs);
  for (double v : rep.solution) CHECK(v == 0.0);
}

TEST_CASE("manufactured solution converges at second order") {
  // u = sin(pi x / nx) sin(pi y / ny) with f = lap(u)
  auto max_error = [](int n) {
    const GridLevel level{n, n, 1, 0};
    std::vector<double> source(level.node_count());
    std::vector<double> exact(level.node_count());
    const double factor = -kPi * kPi * 2.0 / (static_cast<double>(n) * n);
    for (int x = 0; x <= n; ++x) {
      for (int y = 0; y <= n; ++y) {
        const double u = std::sin(kPi * x / n) * std::sin(kPi * y / n);
        exact[level.node_index(x, y)] = u;
        source[level.node_index(x, y)] = factor * u;
      }
    }
    const LinearSystem sys = assemble_poisson(level, source);
    const SolveReport rep = cholesky_solve_system(sys.matrix, sys.rhs);
    double err = 0.0;
    for (int i = 0; i < level.node_count(); ++i) {
      err = std::max(err, std::abs(rep.solution[i] - exact[i]));
    }
    return err;
  };

  const double e16 = max_error(16);
  const double e32 = max_error(32);
  const double e64 = max_error(64);
  const double rate1 = std::log2(e16 / e32);
  const double rate2 = std::log2(e32 / e64);
  CHECK(rate1 > 1.8);
  CHECK(rate1 < 2.2);
  CHECK(rate2 > 1.8);
  CHECK(rate2 < 2.2);
}

TEST_CASE("compliance basics") {
  std::vector<Triplet> ts = {{0, 0, 2.0}, {1, 1, 3.0}, {0, 1, 0.5}, {1, 0, 0.5}};
  const SparseSymMatrix k = SparseSymMatrix::from_triplets(2, ts);

  CHECK(compliance(k, {0.0, 0.0}) == 0.0);
  CHECK(compliance(k, {1.0, 0.0}) == doctest::Approx(2.0));
  CHECK(compliance(k, {0.0, 1.0}) == doctest::Approx(3.0));
  CHECK_THROWS_AS(compliance(k, {1.0}), DimensionError);
}

TEST_CASE("compliance equals F.U at equilibrium") {
  const GridLevel level{6, 6, 2, 0};
  const std::vector<double> moduli(36, 1.0);
  const LinearSystem sys = assemble_from_moduli(level, moduli, 0.3,
                                                wall_boundary_conditions(level));
  const SolveReport rep = cholesky_solve_system(sys.matrix, sys.rhs);
  const double c = compliance(sys.matrix, rep.solution);
  const double fu = dot(sys.rhs, rep.solution);
  CHECK(c == doctest::Approx(fu).epsilon(1e-8));
  CHECK(c >= 0.0);
}

TEST_CASE("stiffness grows monotonically with the stiff-phase density") {
  const GridLevel level{3, 3, 2, 0};
  MaterialModel mat;
  mat.phase_moduli = {9.0, 3.0, 1.0, 1e-9};
  oracle::Rng rng(11);

  DensityField d(3, 3, 4);
  for (int e = 0; e < 9; ++e) {
    double rest = 1.0;
    for (int i = 0; i < 3; ++i) {
      d.at(e, i) = rng.uniform(0.05, 0.25);
      rest -= d.at(e, i);
    }
    d.at(e, 3) = rest;
  }
  std::vector<double> x(level.dof_count());
  for (double& v : x) v = rng.uniform(-1.0, 1.0);

  const LinearSystem base = assemble_elasticity(level, d, mat, {});
  const double before = compliance(base.matrix, x);
  for (int e = 0; e < 9; ++e) {
    DensityField raised = d;
    raised.at(e, 0) += 0.05;  // others fixed
    const LinearSystem up = assemble_elasticity(level, raised, mat, {});
    CHECK(compliance(up.matrix, x) >= before - 1e-10 * std::abs(before));
  }
}

TEST_CASE("assembled systems are symmetric and positive definite") {
  const GridLevel elastic{6, 4, 2, 0};
  MaterialModel mat;
  mat.phase_moduli = {9.0, 3.0, 1.0, 1e-9};
  const DensityField d = DensityField::uniform(6, 4, {0.16, 0.08, 0.08, 0.68});
  const LinearSystem sys = assemble_elasticity(elastic, d, mat,
                                               wall_boundary_conditions(elastic));
  CHECK(sys.matrix.is_symmetric());
  CHECK_NOTHROW(CholeskyFactor::factor(sys.matrix));

  const GridLevel scalar{6, 6, 1, 0};
  const LinearSystem poisson = assemble_poisson(scalar, 1.0);
  CHECK(poisson.matrix.is_symmetric());
  CHECK_NOTHROW(CholeskyFactor::factor(poisson.matrix));
}
