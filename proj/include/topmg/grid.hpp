#pragma once

#include <vector>

namespace topmg {

/// One structured quad grid. Node numbering is column-major everywhere:
/// node (x, y) has index x*(ny+1) + y, and dof index node*dofs_per_node + c.
/// Elements follow the same convention: element (ex, ey) is ex*ny + ey.
struct GridLevel {
  int nx = 0;             // elements in x
  int ny = 0;             // elements in y
  int dofs_per_node = 1;  // 1 scalar, 2 plane elasticity
  int level_index = 0;    // 0 = coarsest

  int node_count() const { return (nx + 1) * (ny + 1); }
  int dof_count() const { return dofs_per_node * node_count(); }
  int element_count() const { return nx * ny; }
  int node_index(int x, int y) const { return x * (ny + 1) + y; }
  int dof_index(int x, int y, int component) const {
    return node_index(x, y) * dofs_per_node + component;
  }
  int element_index(int ex, int ey) const { return ex * ny + ey; }
};

/// Bilinear prolongation from one level to the next finer one, stored row-wise
/// per fine dof (at most 4 coarse parents each). Restriction is the scaled
/// transpose P^T/4 and reuses the same storage.
struct TransferOperator {
  int fine_dofs = 0;
  int coarse_dofs = 0;
  std::vector<int> offsets;  // fine_dofs + 1
  std::vector<int> parents;  // coarse dof ids
  std::vector<double> weights;
};

struct GridHierarchy {
  std::vector<GridLevel> levels;               // coarsest first
  std::vector<TransferOperator> prolongations;  // prolongations[l-1] maps level l-1 -> l

  int num_levels() const { return static_cast<int>(levels.size()); }
  int finest() const { return num_levels() - 1; }
  const GridLevel& finest_level() const { return levels.back(); }
  const TransferOperator& prolongation_to(int level) const {
    return prolongations[static_cast<std::size_t>(level) - 1];
  }
};

/// Builds num_coarsenings+1 nested levels; the finest is (nx_fine, ny_fine)
/// and each coarser level halves both element counts. Throws ConfigError if
/// a dimension is not divisible by 2^num_coarsenings.
GridHierarchy build_hierarchy(int nx_fine, int ny_fine, int num_coarsenings,
                              int dofs_per_node);

/// Interpolates a coarse dof vector (level-1) onto `level`.
std::vector<double> prolongate(const GridHierarchy& h, int level,
                               const std::vector<double>& coarse_vec);

/// Full-weighting restriction of a fine dof vector (level) onto level-1:
/// (1/4) P^T v.
std::vector<double> restrict(const GridHierarchy& h, int level,
                             const std::vector<double>& fine_vec);

}  // namespace topmg
