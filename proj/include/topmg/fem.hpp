#pragma once

#include <array>
#include <utility>
#include <vector>

#include "topmg/density.hpp"
#include "topmg/grid.hpp"
#include "topmg/sparse.hpp"

namespace topmg {

/// Homogeneous Dirichlet constraints plus nodal point loads.
struct BoundaryConditions {
  std::vector<int> fixed_dofs;                    // prescribed zero
  std::vector<std::pair<int, double>> point_loads;  // (dof, value)

  void validate(int dof_count) const;  // throws ConfigError
};

// 8x8 element stiffness, row-major. Element dof order is (u, v) per node,
// nodes counterclockwise from the lower-left corner.
using ElementMatrix = std::array<double, 64>;

/// Plane-stress Q4 stiffness of a unit square element, 2x2 Gauss quadrature.
ElementMatrix element_stiffness(double modulus, double poisson_ratio);

/// Global dof indices of one element in the element-matrix order.
std::array<int, 8> element_dofs(const GridLevel& level, int ex, int ey);

struct LinearSystem {
  SparseSymMatrix matrix;
  std::vector<double> rhs;
};

/// Elasticity stiffness with an explicit per-element modulus; fixed dofs are
/// eliminated as zero row/column with a unit diagonal and a zeroed rhs entry.
LinearSystem assemble_from_moduli(const GridLevel& level,
                                  const std::vector<double>& element_moduli,
                                  double poisson_ratio,
                                  const BoundaryConditions& bc);

/// Multi-material elasticity: per-element modulus from SIMP interpolation of
/// the density field.
LinearSystem assemble_elasticity(const GridLevel& level, const DensityField& density,
                                 const MaterialModel& mat, const BoundaryConditions& bc);

/// Q4 Galerkin discretization of -lap(u) = -f with u = 0 on the whole
/// boundary; `node_source` holds f at every node.
LinearSystem assemble_poisson(const GridLevel& level,
                              const std::vector<double>& node_source);
LinearSystem assemble_poisson(const GridLevel& level, double constant_source);

/// Strain energy U^T K U.
double compliance(const SparseSymMatrix& k, const std::vector<double>& u);

/// Per-element u_e^T k_hat u_e with the unit-modulus element stiffness; the
/// building block of the compliance sensitivities.
std::vector<double> element_energies(const GridLevel& level,
                                     const std::vector<double>& u,
                                     double poisson_ratio);

/// Square wall configuration: bottom edge fully fixed, unit downward point
/// load at the top-edge midpoint node. nx must be even.
BoundaryConditions wall_boundary_conditions(const GridLevel& level);

}  // namespace topmg
