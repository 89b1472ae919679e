#include "topmg/grid.hpp"

#include <string>

#include "topmg/errors.hpp"

namespace topmg {

namespace {

// Bilinear stencil of one fine node: coincident coarse node (weight 1),
// edge midpoint (1/2 + 1/2) or cell center (four times 1/4).
TransferOperator build_prolongation(const GridLevel& coarse, const GridLevel& fine) {
  TransferOperator op;
  op.fine_dofs = fine.dof_count();
  op.coarse_dofs = coarse.dof_count();
  op.offsets.reserve(static_cast<std::size_t>(op.fine_dofs) + 1);
  op.offsets.push_back(0);

  const int dpn = fine.dofs_per_node;
  for (int fx = 0; fx <= fine.nx; ++fx) {
    for (int fy = 0; fy <= fine.ny; ++fy) {
      // coarse parents of this fine node with bilinear weights
      int px[2], py[2];
      double wx[2], wy[2];
      int ncx, ncy;
      if (fx % 2 == 0) {
        ncx = 1; px[0] = fx / 2; wx[0] = 1.0;
      } else {
        ncx = 2; px[0] = fx / 2; px[1] = fx / 2 + 1; wx[0] = wx[1] = 0.5;
      }
      if (fy % 2 == 0) {
        ncy = 1; py[0] = fy / 2; wy[0] = 1.0;
      } else {
        ncy = 2; py[0] = fy / 2; py[1] = fy / 2 + 1; wy[0] = wy[1] = 0.5;
      }
      for (int c = 0; c < dpn; ++c) {
        for (int a = 0; a < ncx; ++a) {
          for (int b = 0; b < ncy; ++b) {
            op.parents.push_back(coarse.node_index(px[a], py[b]) * dpn + c);
            op.weights.push_back(wx[a] * wy[b]);
          }
        }
        op.offsets.push_back(static_cast<int>(op.parents.size()));
      }
    }
  }
  return op;
}

}  // namespace

GridHierarchy build_hierarchy(int nx_fine, int ny_fine, int num_coarsenings,
                              int dofs_per_node) {
  if (nx_fine < 1 || ny_fine < 1) {
    throw ConfigError("grid must have at least one element per direction, got " +
                      std::to_string(nx_fine) + "x" + std::to_string(ny_fine));
  }
  if (num_coarsenings < 0) {
    throw ConfigError("num_coarsenings must be non-negative");
  }
  if (dofs_per_node != 1 && dofs_per_node != 2) {
    throw ConfigError("dofs_per_node must be 1 or 2");
  }
  const int factor = 1 << num_coarsenings;
  if (nx_fine % factor != 0) {
    throw ConfigError("nx = " + std::to_string(nx_fine) + " is not divisible by 2^" +
                      std::to_string(num_coarsenings) + " = " + std::to_string(factor));
  }
  if (ny_fine % factor != 0) {
    throw ConfigError("ny = " + std::to_string(ny_fine) + " is not divisible by 2^" +
                      std::to_string(num_coarsenings) + " = " + std::to_string(factor));
  }
  if (nx_fine / factor < 1 || ny_fine / factor < 1) {
    throw ConfigError("coarsening " + std::to_string(num_coarsenings) +
                      " times would shrink " + std::to_string(nx_fine) + "x" +
                      std::to_string(ny_fine) + " below 1x1");
  }

  GridHierarchy h;
  h.levels.resize(static_cast<std::size_t>(num_coarsenings) + 1);
  for (int l = 0; l <= num_coarsenings; ++l) {
    GridLevel& lv = h.levels[static_cast<std::size_t>(l)];
    const int shrink = 1 << (num_coarsenings - l);
    lv.nx = nx_fine / shrink;
    lv.ny = ny_fine / shrink;
    lv.dofs_per_node = dofs_per_node;
    lv.level_index = l;
  }
  h.prolongations.reserve(static_cast<std::size_t>(num_coarsenings));
  for (int l = 1; l <= num_coarsenings; ++l) {
    h.prolongations.push_back(build_prolongation(h.levels[static_cast<std::size_t>(l) - 1],
                                                 h.levels[static_cast<std::size_t>(l)]));
  }
  return h;
}

std::vector<double> prolongate(const GridHierarchy& h, int level,
                               const std::vector<double>& coarse_vec) {
  if (level < 1 || level > h.finest()) {
    throw DimensionError("prolongate: level " + std::to_string(level) +
                         " has no coarser neighbor");
  }
  const TransferOperator& p = h.prolongation_to(level);
  if (static_cast<int>(coarse_vec.size()) != p.coarse_dofs) {
    throw DimensionError("prolongate: vector length " +
                         std::to_string(coarse_vec.size()) + " != coarse dof count " +
                         std::to_string(p.coarse_dofs));
  }
  std::vector<double> fine(static_cast<std::size_t>(p.fine_dofs), 0.0);
  for (int i = 0; i < p.fine_dofs; ++i) {
    double s = 0.0;
    for (int k = p.offsets[i]; k < p.offsets[i + 1]; ++k) {
      s += p.weights[static_cast<std::size_t>(k)] *
           coarse_vec[static_cast<std::size_t>(p.parents[static_cast<std::size_t>(k)])];
    }
    fine[static_cast<std::size_t>(i)] = s;
  }
  return fine;
}

std::vector<double> restrict(const GridHierarchy& h, int level,
                             const std::vector<double>& fine_vec) {
  if (level < 1 || level > h.finest()) {
    throw DimensionError("restrict: level " + std::to_string(level) +
                         " has no coarser neighbor");
  }
  const TransferOperator& p = h.prolongation_to(level);
  if (static_cast<int>(fine_vec.size()) != p.fine_dofs) {
    throw DimensionError("restrict: vector length " + std::to_string(fine_vec.size()) +
                         " != fine dof count " + std::to_string(p.fine_dofs));
  }
  std::vector<double> coarse(static_cast<std::size_t>(p.coarse_dofs), 0.0);
  for (int i = 0; i < p.fine_dofs; ++i) {
    const double v = 0.25 * fine_vec[static_cast<std::size_t>(i)];
    for (int k = p.offsets[i]; k < p.offsets[i + 1]; ++k) {
      coarse[static_cast<std::size_t>(p.parents[static_cast<std::size_t>(k)])] +=
          p.weights[static_cast<std::size_t>(k)] * v;
    }
  }
  return coarse;
}

}  // namespace topmg
