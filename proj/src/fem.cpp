#include "topmg/fem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "topmg/errors.hpp"

namespace topmg {

namespace {

constexpr double kGauss = 0.57735026918962576451;  // 1/sqrt(3)

// Shape-function derivatives on the unit square at local point (xi, eta) in
// [-1,1]^2; nodes counterclockwise from the lower-left corner. The element has
// side length 1, so d/dx = 2 d/dxi.
void shape_gradients(double xi, double eta, double dndx[4], double dndy[4]) {
  dndx[0] = 2.0 * (-(1.0 - eta) / 4.0);
  dndx[1] = 2.0 * ((1.0 - eta) / 4.0);
  dndx[2] = 2.0 * ((1.0 + eta) / 4.0);
  dndx[3] = 2.0 * (-(1.0 + eta) / 4.0);
  dndy[0] = 2.0 * (-(1.0 - xi) / 4.0);
  dndy[1] = 2.0 * (-(1.0 + xi) / 4.0);
  dndy[2] = 2.0 * ((1.0 + xi) / 4.0);
  dndy[3] = 2.0 * ((1.0 - xi) / 4.0);
}

void shape_values(double xi, double eta, double n[4]) {
  n[0] = (1.0 - xi) * (1.0 - eta) / 4.0;
  n[1] = (1.0 + xi) * (1.0 - eta) / 4.0;
  n[2] = (1.0 + xi) * (1.0 + eta) / 4.0;
  n[3] = (1.0 - xi) * (1.0 + eta) / 4.0;
}

// 4x4 Laplacian element matrix: integral of grad(N_i).grad(N_j).
std::array<double, 16> poisson_element_matrix() {
  std::array<double, 16> k{};
  const double pts[2] = {-kGauss, kGauss};
  for (double xi : pts) {
    for (double eta : pts) {
      double dndx[4], dndy[4];
      shape_gradients(xi, eta, dndx, dndy);
      for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
          k[static_cast<std::size_t>(i * 4 + j)] +=
              0.25 * (dndx[i] * dndx[j] + dndy[i] * dndy[j]);
        }
      }
    }
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < i; ++j) {
      k[static_cast<std::size_t>(i * 4 + j)] = k[static_cast<std::size_t>(j * 4 + i)];
    }
  }
  return k;
}

// 4x4 element mass matrix for the consistent source term.
std::array<double, 16> poisson_mass_matrix() {
  std::array<double, 16> m{};
  const double pts[2] = {-kGauss, kGauss};
  for (double xi : pts) {
    for (double eta : pts) {
      double n[4];
      shape_values(xi, eta, n);
      for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
          m[static_cast<std::size_t>(i * 4 + j)] += 0.25 * n[i] * n[j];
        }
      }
    }
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < i; ++j) {
      m[static_cast<std::size_t>(i * 4 + j)] = m[static_cast<std::size_t>(j * 4 + i)];
    }
  }
  return m;
}

std::array<int, 4> element_nodes(const GridLevel& level, int ex, int ey) {
  return {level.node_index(ex, ey), level.node_index(ex + 1, ey),
          level.node_index(ex + 1, ey + 1), level.node_index(ex, ey + 1)};
}

// Applies the elimination convention to an assembled triplet list.
LinearSystem finish_assembly(int n, std::vector<Triplet>& entries,
                             std::vector<double> rhs, const std::vector<int>& fixed) {
  std::vector<char> is_fixed(static_cast<std::size_t>(n), 0);
  for (int d : fixed) is_fixed[static_cast<std::size_t>(d)] = 1;

  std::erase_if(entries, [&](const Triplet& t) {
    return is_fixed[static_cast<std::size_t>(t.row)] ||
           is_fixed[static_cast<std::size_t>(t.col)];
  });
  for (int d : fixed) {
    entries.push_back({d, d, 1.0});
    rhs[static_cast<std::size_t>(d)] = 0.0;
  }
  LinearSystem sys;
  sys.matrix = SparseSymMatrix::from_triplets(n, std::move(entries));
  sys.rhs = std::move(rhs);
  return sys;
}

}  // namespace

void BoundaryConditions::validate(int dof_count) const {
  std::vector<char> is_fixed(static_cast<std::size_t>(dof_count), 0);
  for (int d : fixed_dofs) {
    if (d < 0 || d >= dof_count) {
      throw ConfigError("fixed dof " + std::to_string(d) + " outside [0, " +
                        std::to_string(dof_count) + ")");
    }
    is_fixed[static_cast<std::size_t>(d)] = 1;
  }
  for (const auto& [dof, value] : point_loads) {
    if (dof < 0 || dof >= dof_count) {
      throw ConfigError("loaded dof " + std::to_string(dof) + " outside [0, " +
                        std::to_string(dof_count) + ")");
    }
    if (is_fixed[static_cast<std::size_t>(dof)]) {
      throw ConfigError("dof " + std::to_string(dof) + " is both fixed and loaded");
    }
    (void)value;
  }
}

ElementMatrix element_stiffness(double modulus, double poisson_ratio) {
  const double nu = poisson_ratio;
  const double c = modulus / (1.0 - nu * nu);
  // plane-stress material matrix
  const double d00 = c, d01 = c * nu, d22 = c * (1.0 - nu) / 2.0;

  ElementMatrix k{};
  const double pts[2] = {-kGauss, kGauss};
  for (double xi : pts) {
    for (double eta : pts) {
      double dndx[4], dndy[4];
      shape_gradients(xi, eta, dndx, dndy);
      // B rows: [dN/dx 0; 0 dN/dy; dN/dy dN/dx] per node
      for (int i = 0; i < 8; ++i) {
        const int ni = i / 2;
        const bool ui = (i % 2 == 0);
        const double bi0 = ui ? dndx[ni] : 0.0;
        const double bi1 = ui ? 0.0 : dndy[ni];
        const double bi2 = ui ? dndy[ni] : dndx[ni];
        for (int j = i; j < 8; ++j) {
          const int nj = j / 2;
          const bool uj = (j % 2 == 0);
          const double bj0 = uj ? dndx[nj] : 0.0;
          const double bj1 = uj ? 0.0 : dndy[nj];
          const double bj2 = uj ? dndy[nj] : dndx[nj];
          const double v = bi0 * (d00 * bj0 + d01 * bj1) +
                           bi1 * (d01 * bj0 + d00 * bj1) + bi2 * d22 * bj2;
          k[static_cast<std::size_t>(i * 8 + j)] += 0.25 * v;
        }
      }
    }
  }
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < i; ++j) {
      k[static_cast<std::size_t>(i * 8 + j)] = k[static_cast<std::size_t>(j * 8 + i)];
    }
  }
  return k;
}

std::array<int, 8> element_dofs(const GridLevel& level, int ex, int ey) {
  const std::array<int, 4> nodes = element_nodes(level, ex, ey);
  std::array<int, 8> dofs{};
  for (int a = 0; a < 4; ++a) {
    dofs[static_cast<std::size_t>(2 * a)] = 2 * nodes[static_cast<std::size_t>(a)];
    dofs[static_cast<std::size_t>(2 * a + 1)] = 2 * nodes[static_cast<std::size_t>(a)] + 1;
  }
  return dofs;
}

LinearSystem assemble_from_moduli(const GridLevel& level,
                                  const std::vector<double>& element_moduli,
                                  double poisson_ratio,
                                  const BoundaryConditions& bc) {
  if (level.dofs_per_node != 2) {
    throw DimensionError("elasticity assembly needs 2 dofs per node");
  }
  if (static_cast<int>(element_moduli.size()) != level.element_count()) {
    throw DimensionError("element modulus count " +
                         std::to_string(element_moduli.size()) +
                         " does not match grid with " +
                         std::to_string(level.element_count()) + " elements");
  }
  const int n = level.dof_count();
  bc.validate(n);

  const ElementMatrix k_unit = element_stiffness(1.0, poisson_ratio);
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(level.element_count()) * 64);
  for (int ex = 0; ex < level.nx; ++ex) {
    for (int ey = 0; ey < level.ny; ++ey) {
      const double e = element_moduli[static_cast<std::size_t>(level.element_index(ex, ey))];
      const std::array<int, 8> dofs = element_dofs(level, ex, ey);
      for (int a = 0; a < 8; ++a) {
        for (int b = 0; b < 8; ++b) {
          entries.push_back({dofs[static_cast<std::size_t>(a)],
                             dofs[static_cast<std::size_t>(b)],
                             e * k_unit[static_cast<std::size_t>(a * 8 + b)]});
        }
      }
    }
  }

  std::vector<double> rhs(static_cast<std::size_t>(n), 0.0);
  for (const auto& [dof, value] : bc.point_loads) {
    rhs[static_cast<std::size_t>(dof)] += value;
  }
  return finish_assembly(n, entries, std::move(rhs), bc.fixed_dofs);
}

LinearSystem assemble_elasticity(const GridLevel& level, const DensityField& density,
                                 const MaterialModel& mat, const BoundaryConditions& bc) {
  if (density.nx() != level.nx || density.ny() != level.ny) {
    throw DimensionError("density grid " + std::to_string(density.nx()) + "x" +
                         std::to_string(density.ny()) + " does not match level " +
                         std::to_string(level.nx) + "x" + std::to_string(level.ny));
  }
  return assemble_from_moduli(level, effective_moduli(density, mat),
                              mat.poisson_ratio, bc);
}

LinearSystem assemble_poisson(const GridLevel& level,
                              const std::vector<double>& node_source) {
  if (level.dofs_per_node != 1) {
    throw DimensionError("poisson assembly needs 1 dof per node");
  }
  if (static_cast<int>(node_source.size()) != level.node_count()) {
    throw DimensionError("source length " + std::to_string(node_source.size()) +
                         " does not match node count " +
                         std::to_string(level.node_count()));
  }
  const int n = level.dof_count();
  const std::array<double, 16> k_lap = poisson_element_matrix();
  const std::array<double, 16> m_mass = poisson_mass_matrix();

  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(level.element_count()) * 16);
  std::vector<double> rhs(static_cast<std::size_t>(n), 0.0);
  for (int ex = 0; ex < level.nx; ++ex) {
    for (int ey = 0; ey < level.ny; ++ey) {
      const std::array<int, 4> nodes = element_nodes(level, ex, ey);
      for (int a = 0; a < 4; ++a) {
        double load = 0.0;
        for (int b = 0; b < 4; ++b) {
          entries.push_back({nodes[static_cast<std::size_t>(a)],
                             nodes[static_cast<std::size_t>(b)],
                             k_lap[static_cast<std::size_t>(a * 4 + b)]});
          load += m_mass[static_cast<std::size_t>(a * 4 + b)] *
                  node_source[static_cast<std::size_t>(nodes[static_cast<std::size_t>(b)])];
        }
        // system is -lap(u) = -f, so the consistent load enters negated
        rhs[static_cast<std::size_t>(nodes[static_cast<std::size_t>(a)])] -= load;
      }
    }
  }

  std::vector<int> boundary;
  for (int x = 0; x <= level.nx; ++x) {
    for (int y = 0; y <= level.ny; ++y) {
      if (x == 0 || y == 0 || x == level.nx || y == level.ny) {
        boundary.push_back(level.node_index(x, y));
      }
    }
  }
  return finish_assembly(n, entries, std::move(rhs), boundary);
}

LinearSystem assemble_poisson(const GridLevel& level, double constant_source) {
  return assemble_poisson(
      level, std::vector<double>(static_cast<std::size_t>(level.node_count()),
                                 constant_source));
}

double compliance(const SparseSymMatrix& k, const std::vector<double>& u) {
  if (static_cast<int>(u.size()) != k.size()) {
    throw DimensionError("compliance: vector length " + std::to_string(u.size()) +
                         " != matrix size " + std::to_string(k.size()));
  }
  return dot(u, k.multiply(u));
}

std::vector<double> element_energies(const GridLevel& level,
                                     const std::vector<double>& u,
                                     double poisson_ratio) {
  if (static_cast<int>(u.size()) != level.dof_count()) {
    throw DimensionError("element_energies: vector length " + std::to_string(u.size()) +
                         " != dof count " + std::to_string(level.dof_count()));
  }
  const ElementMatrix k_unit = element_stiffness(1.0, poisson_ratio);
  std::vector<double> energies(static_cast<std::size_t>(level.element_count()), 0.0);
  for (int ex = 0; ex < level.nx; ++ex) {
    for (int ey = 0; ey < level.ny; ++ey) {
      const std::array<int, 8> dofs = element_dofs(level, ex, ey);
      double ue[8];
      for (int a = 0; a < 8; ++a) ue[a] = u[static_cast<std::size_t>(dofs[static_cast<std::size_t>(a)])];
      double s = 0.0;
      for (int a = 0; a < 8; ++a) {
        double row = 0.0;
        for (int b = 0; b < 8; ++b) {
          row += k_unit[static_cast<std::size_t>(a * 8 + b)] * ue[b];
        }
        s += ue[a] * row;
      }
      energies[static_cast<std::size_t>(level.element_index(ex, ey))] = s;
    }
  }
  return energies;
}

BoundaryConditions wall_boundary_conditions(const GridLevel& level) {
  if (level.dofs_per_node != 2) {
    throw ConfigError("wall problem needs 2 dofs per node");
  }
  if (level.nx % 2 != 0) {
    throw ConfigError("wall load sits on the top-edge midpoint; nx must be even");
  }
  BoundaryConditions bc;
  for (int x = 0; x <= level.nx; ++x) {
    const int node = level.node_index(x, 0);
    bc.fixed_dofs.push_back(2 * node);
    bc.fixed_dofs.push_back(2 * node + 1);
  }
  const int top_mid = level.node_index(level.nx / 2, level.ny);
  bc.point_loads.emplace_back(2 * top_mid + 1, -1.0);
  return bc;
}

}  // namespace topmg
