#include "topmg/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "topmg/errors.hpp"

namespace topmg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double> checked_diagonal(const SparseSymMatrix& a) {
  std::vector<double> d = a.diagonal();
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] == 0.0) {
      throw SplittingError("zero diagonal entry at dof " + std::to_string(i));
    }
  }
  return d;
}

// x += omega * D^-1 r, with r = b - Ax computed into the scratch buffer.
void jacobi_sweep(const SparseSymMatrix& a, std::vector<double>& x,
                  const std::vector<double>& b, const std::vector<double>& diag,
                  double omega, std::vector<double>& scratch) {
  a.multiply(x, scratch);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] += omega * (b[i] - scratch[i]) / diag[i];
  }
}

void gauss_seidel_sweep(const SparseSymMatrix& a, std::vector<double>& x,
                        const std::vector<double>& b, const std::vector<double>& diag) {
  const std::vector<int>& off = a.row_offsets();
  const int* cols = a.col_indices().data();
  const double* vals = a.values().data();
  const int n = a.size();
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = off[static_cast<std::size_t>(i)]; k < off[static_cast<std::size_t>(i) + 1]; ++k) {
      s += vals[k] * x[static_cast<std::size_t>(cols[k])];
    }
    // s still contains the old diagonal term; fold it into the update
    x[static_cast<std::size_t>(i)] += (b[static_cast<std::size_t>(i)] - s) /
                                      diag[static_cast<std::size_t>(i)];
  }
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::cholesky: return "cholesky";
    case Method::jacobi: return "jacobi";
    case Method::damped_jacobi: return "damped-jacobi";
    case Method::gauss_seidel: return "gauss-seidel";
    case Method::cg: return "cg";
    case Method::pcgmg: return "pcgmg";
  }
  return "?";
}

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw ConfigError("solver tol must be positive");
  if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (!(omega > 0.0 && omega <= 1.0)) {
    throw ConfigError("omega must lie in (0, 1], got " + std::to_string(omega));
  }
  if (gamma != 1 && gamma != 2) {
    throw ConfigError("gamma must be 1 (V-cycle) or 2 (W-cycle)");
  }
  if (pre_sweeps < 0 || post_sweeps < 0) {
    throw ConfigError("smoothing sweep counts must be non-negative");
  }
  if (num_coarsenings < 0) throw ConfigError("num_coarsenings must be non-negative");
  if (method == Method::pcgmg && pre_sweeps != post_sweeps) {
    throw ConfigError("pcgmg needs pre_sweeps == post_sweeps for a symmetric "
                      "preconditioner");
  }
}

CholeskyFactor CholeskyFactor::factor(const SparseSymMatrix& a) {
  const int n = a.size();
  CholeskyFactor f;
  f.n_ = n;
  f.first_.resize(static_cast<std::size_t>(n));
  f.offsets_.resize(static_cast<std::size_t>(n) + 1);
  f.offsets_[0] = 0;

  const std::vector<int>& off = a.row_offsets();
  const int* cols = a.col_indices().data();
  const double* vals = a.values().data();

  for (int i = 0; i < n; ++i) {
    int first = i;
    if (off[static_cast<std::size_t>(i)] < off[static_cast<std::size_t>(i) + 1]) {
      first = std::min(first, cols[off[static_cast<std::size_t>(i)]]);
    }
    f.first_[static_cast<std::size_t>(i)] = first;
    f.offsets_[static_cast<std::size_t>(i) + 1] =
        f.offsets_[static_cast<std::size_t>(i)] + static_cast<std::size_t>(i - first + 1);
  }
  f.values_.assign(f.offsets_[static_cast<std::size_t>(n)], 0.0);

  // scatter the lower triangle of A into the envelope
  for (int i = 0; i < n; ++i) {
    const std::size_t row_at = f.offsets_[static_cast<std::size_t>(i)];
    const int first = f.first_[static_cast<std::size_t>(i)];
    for (int k = off[static_cast<std::size_t>(i)]; k < off[static_cast<std::size_t>(i) + 1]; ++k) {
      if (cols[k] <= i) {
        f.values_[row_at + static_cast<std::size_t>(cols[k] - first)] = vals[k];
      }
    }
  }

  double* lv = f.values_.data();
  for (int i = 0; i < n; ++i) {
    const int fi = f.first_[static_cast<std::size_t>(i)];
    const std::size_t ri = f.offsets_[static_cast<std::size_t>(i)];
    for (int j = fi; j < i; ++j) {
      const int fj = f.first_[static_cast<std::size_t>(j)];
      const std::size_t rj = f.offsets_[static_cast<std::size_t>(j)];
      const int kmin = std::max(fi, fj);
      double s = lv[ri + static_cast<std::size_t>(j - fi)];
      for (int k = kmin; k < j; ++k) {
        s -= lv[ri + static_cast<std::size_t>(k - fi)] *
             lv[rj + static_cast<std::size_t>(k - fj)];
      }
      lv[ri + static_cast<std::size_t>(j - fi)] =
          s / lv[rj + static_cast<std::size_t>(j - fj)];
    }
    double d = lv[ri + static_cast<std::size_t>(i - fi)];
    for (int k = fi; k < i; ++k) {
      const double lik = lv[ri + static_cast<std::size_t>(k - fi)];
      d -= lik * lik;
    }
    if (!(d > 0.0)) {
      throw DefinitenessError("matrix is not positive definite: pivot " +
                                  std::to_string(d) + " at row " + std::to_string(i),
                              i);
    }
    lv[ri + static_cast<std::size_t>(i - fi)] = std::sqrt(d);
  }
  return f;
}

std::vector<double> CholeskyFactor::solve(const std::vector<double>& b) const {
  if (static_cast<int>(b.size()) != n_) {
    throw DimensionError("cholesky solve: vector length " + std::to_string(b.size()) +
                         " != matrix size " + std::to_string(n_));
  }
  const double* lv = values_.data();
  std::vector<double> y = b;
  // forward substitution L y = b
  for (int i = 0; i < n_; ++i) {
    const int fi = first_[static_cast<std::size_t>(i)];
    const std::size_t ri = offsets_[static_cast<std::size_t>(i)];
    double s = y[static_cast<std::size_t>(i)];
    for (int k = fi; k < i; ++k) {
      s -= lv[ri + static_cast<std::size_t>(k - fi)] * y[static_cast<std::size_t>(k)];
    }
    y[static_cast<std::size_t>(i)] = s / lv[ri + static_cast<std::size_t>(i - fi)];
  }
  // back substitution L^T x = y
  for (int i = n_ - 1; i >= 0; --i) {
    const int fi = first_[static_cast<std::size_t>(i)];
    const std::size_t ri = offsets_[static_cast<std::size_t>(i)];
    const double xi = y[static_cast<std::size_t>(i)] /
                      lv[ri + static_cast<std::size_t>(i - fi)];
    y[static_cast<std::size_t>(i)] = xi;
    for (int k = fi; k < i; ++k) {
      y[static_cast<std::size_t>(k)] -= lv[ri + static_cast<std::size_t>(k - fi)] * xi;
    }
  }
  return y;
}

double CholeskyFactor::product_entry(int i, int j) const {
  if (j > i) std::swap(i, j);
  const int fi = first_[static_cast<std::size_t>(i)];
  const int fj = first_[static_cast<std::size_t>(j)];
  double s = 0.0;
  for (int k = std::max(fi, fj); k <= j; ++k) {
    s += values_[offsets_[static_cast<std::size_t>(i)] + static_cast<std::size_t>(k - fi)] *
         values_[offsets_[static_cast<std::size_t>(j)] + static_cast<std::size_t>(k - fj)];
  }
  return s;
}

SolveReport cholesky_solve_system(const SparseSymMatrix& a, const std::vector<double>& b) {
  const auto t0 = Clock::now();
  SolveReport rep;
  const CholeskyFactor f = CholeskyFactor::factor(a);
  rep.solution = f.solve(b);
  rep.seconds = seconds_since(t0);
  rep.iterations = 1;
  const double bnorm = norm2(b);
  rep.final_residual = bnorm > 0.0 ? norm2(a.residual(b, rep.solution)) / bnorm : 0.0;
  rep.converged = true;
  rep.residual_history = {rep.final_residual};
  return rep;
}

void smoother_sweep(const SparseSymMatrix& a, std::vector<double>& x,
                    const std::vector<double>& b, SmootherKind kind, double omega) {
  if (static_cast<int>(x.size()) != a.size() ||
      static_cast<int>(b.size()) != a.size()) {
    throw DimensionError("smoother_sweep: vector lengths do not match matrix size " +
                         std::to_string(a.size()));
  }
  const std::vector<double> diag = checked_diagonal(a);
  std::vector<double> scratch;
  switch (kind) {
    case SmootherKind::jacobi:
      jacobi_sweep(a, x, b, diag, 1.0, scratch);
      break;
    case SmootherKind::damped_jacobi:
      jacobi_sweep(a, x, b, diag, omega, scratch);
      break;
    case SmootherKind::gauss_seidel:
      gauss_seidel_sweep(a, x, b, diag);
      break;
  }
}

SolveReport stationary_solve(const SparseSymMatrix& a, const std::vector<double>& b,
                             SmootherKind kind, double omega, double tol, int max_iter) {
  const auto t0 = Clock::now();
  const std::vector<double> diag = checked_diagonal(a);
  SolveReport rep;
  rep.solution.assign(b.size(), 0.0);

  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    rep.converged = true;
    rep.residual_history = {0.0};
    rep.seconds = seconds_since(t0);
    return rep;
  }

  std::vector<double> scratch(b.size(), 0.0);
  rep.residual_history.reserve(static_cast<std::size_t>(max_iter) + 1);
  rep.residual_history.push_back(1.0);  // x0 = 0
  const double w = (kind == SmootherKind::damped_jacobi) ? omega : 1.0;

  for (int it = 1; it <= max_iter; ++it) {
    if (kind == SmootherKind::gauss_seidel) {
      gauss_seidel_sweep(a, rep.solution, b, diag);
    } else {
      jacobi_sweep(a, rep.solution, b, diag, w, scratch);
    }
    a.multiply(rep.solution, scratch);
    double rr = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const double r = b[i] - scratch[i];
      rr += r * r;
    }
    const double rel = std::sqrt(rr) / bnorm;
    rep.residual_history.push_back(rel);
    rep.iterations = it;
    rep.final_residual = rel;
    if (rel <= tol) {
      rep.converged = true;
      break;
    }
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

SolveReport cg_solve(const SparseSymMatrix& a, const std::vector<double>& b,
                     double tol, int max_iter, const std::vector<double>* x0) {
  const auto t0 = Clock::now();
  SolveReport rep;
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    rep.solution.assign(b.size(), 0.0);
    rep.converged = true;
    rep.residual_history = {0.0};
    rep.seconds = seconds_since(t0);
    return rep;
  }

  rep.solution = x0 ? *x0 : std::vector<double>(b.size(), 0.0);
  std::vector<double> r = x0 ? a.residual(b, rep.solution) : b;
  std::vector<double> p = r;
  std::vector<double> ap(b.size(), 0.0);
  double rr = dot(r, r);

  rep.final_residual = std::sqrt(rr) / bnorm;
  rep.residual_history.push_back(rep.final_residual);
  if (rep.final_residual <= tol) {
    rep.converged = true;
    rep.seconds = seconds_since(t0);
    return rep;
  }

  for (int it = 1; it <= max_iter; ++it) {
    a.multiply(p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) {
      throw DefinitenessError("CG breakdown: p^T A p = " + std::to_string(pap) +
                              " at iteration " + std::to_string(it));
    }
    const double alpha = rr / pap;
    axpy(alpha, p, rep.solution);
    axpy(-alpha, ap, r);

    const double rr_next = dot(r, r);
    rep.iterations = it;
    rep.final_residual = std::sqrt(rr_next) / bnorm;
    rep.residual_history.push_back(rep.final_residual);
    if (rep.final_residual <= tol) {
      rep.converged = true;
      break;
    }
    const double beta = rr_next / rr;
    rr = rr_next;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

SolveReport pcg_solve(const SparseSymMatrix& a, const std::vector<double>& b,
                      const Preconditioner& precond, double tol, int max_iter,
                      const std::vector<double>* x0) {
  const auto t0 = Clock::now();
  SolveReport rep;
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    rep.solution.assign(b.size(), 0.0);
    rep.converged = true;
    rep.residual_history = {0.0};
    rep.seconds = seconds_since(t0);
    return rep;
  }

  rep.solution = x0 ? *x0 : std::vector<double>(b.size(), 0.0);
  std::vector<double> r = x0 ? a.residual(b, rep.solution) : b;
  std::vector<double> p, ap(b.size(), 0.0);
  double zr_prev = 0.0;

  rep.final_residual = norm2(r) / bnorm;
  rep.residual_history.push_back(rep.final_residual);
  if (rep.final_residual <= tol) {
    rep.converged = true;
    rep.seconds = seconds_since(t0);
    return rep;
  }

  for (int it = 1; it <= max_iter; ++it) {
    std::vector<double> z = precond(r);
    const double zr = dot(z, r);
    if (!(zr > 0.0)) {
      throw PreconditionerError("preconditioner is not positive definite: z^T r = " +
                                std::to_string(zr) + " at iteration " +
                                std::to_string(it));
    }
    if (it == 1) {
      p = std::move(z);
    } else {
      const double beta = zr / zr_prev;
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = z[i] + beta * p[i];
    }
    zr_prev = zr;

    a.multiply(p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) {
      throw DefinitenessError("PCG breakdown: p^T A p = " + std::to_string(pap) +
                              " at iteration " + std::to_string(it));
    }
    const double alpha = zr / pap;
    axpy(alpha, p, rep.solution);
    axpy(-alpha, ap, r);

    rep.iterations = it;
    rep.final_residual = norm2(r) / bnorm;
    rep.residual_history.push_back(rep.final_residual);
    if (rep.final_residual <= tol || rep.final_residual == 0.0) {
      rep.converged = true;
      break;
    }
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

SparseSymMatrix galerkin_coarse_matrix(const SparseSymMatrix& fine,
                                       const TransferOperator& p,
                                       const GridLevel& coarse) {
  if (fine.size() != p.fine_dofs || coarse.dof_count() != p.coarse_dofs) {
    throw DimensionError("galerkin: transfer operator does not match matrix sizes");
  }
  const int dpn = coarse.dofs_per_node;
  const int nc = p.coarse_dofs;

  // coarse pattern: all dof pairs of nodes within one cell of each other
  std::vector<int> offsets(static_cast<std::size_t>(nc) + 1, 0);
  std::vector<int> cols;
  for (int x = 0; x <= coarse.nx; ++x) {
    for (int y = 0; y <= coarse.ny; ++y) {
      std::vector<int> node_cols;
      for (int dx = -1; dx <= 1; ++dx) {
        for (int dy = -1; dy <= 1; ++dy) {
          const int nx2 = x + dx, ny2 = y + dy;
          if (nx2 < 0 || ny2 < 0 || nx2 > coarse.nx || ny2 > coarse.ny) continue;
          const int nbr = coarse.node_index(nx2, ny2);
          for (int c = 0; c < dpn; ++c) node_cols.push_back(nbr * dpn + c);
        }
      }
      std::sort(node_cols.begin(), node_cols.end());
      const int node = coarse.node_index(x, y);
      for (int c = 0; c < dpn; ++c) {
        cols.insert(cols.end(), node_cols.begin(), node_cols.end());
        offsets[static_cast<std::size_t>(node * dpn + c) + 1] =
            static_cast<int>(cols.size());
      }
    }
  }
  // the (x, y, c) iteration above visits dof rows in ascending order, so the
  // offsets array is already a valid CSR row pointer

  std::vector<double> vals(cols.size(), 0.0);
  const std::vector<int>& foff = fine.row_offsets();
  const int* fcols = fine.col_indices().data();
  const double* fvals = fine.values().data();

  for (int i = 0; i < p.fine_dofs; ++i) {
    for (int ki = p.offsets[i]; ki < p.offsets[i + 1]; ++ki) {
      const int ci = p.parents[static_cast<std::size_t>(ki)];
      const double wi = 0.25 * p.weights[static_cast<std::size_t>(ki)];
      const int row_begin = offsets[static_cast<std::size_t>(ci)];
      const int row_end = offsets[static_cast<std::size_t>(ci) + 1];
      for (int k = foff[static_cast<std::size_t>(i)]; k < foff[static_cast<std::size_t>(i) + 1]; ++k) {
        const int j = fcols[k];
        const double wiv = wi * fvals[k];
        for (int kj = p.offsets[j]; kj < p.offsets[j + 1]; ++kj) {
          const int cj = p.parents[static_cast<std::size_t>(kj)];
          const int* pos = std::lower_bound(cols.data() + row_begin,
                                            cols.data() + row_end, cj);
          vals[static_cast<std::size_t>(pos - cols.data())] +=
              wiv * p.weights[static_cast<std::size_t>(kj)];
        }
      }
    }
  }
  return SparseSymMatrix::from_csr(nc, std::move(offsets), std::move(cols),
                                   std::move(vals));
}

MultigridOperators build_multigrid_operators(const GridHierarchy& hierarchy,
                                             SparseSymMatrix fine_matrix,
                                             double omega) {
  if (fine_matrix.size() != hierarchy.finest_level().dof_count()) {
    throw DimensionError("multigrid: fine matrix size " +
                         std::to_string(fine_matrix.size()) +
                         " != finest level dof count " +
                         std::to_string(hierarchy.finest_level().dof_count()));
  }
  MultigridOperators ops;
  ops.hierarchy = &hierarchy;
  ops.omega = omega;
  ops.matrices.resize(hierarchy.levels.size());
  ops.matrices.back() = std::move(fine_matrix);
  for (int l = hierarchy.finest(); l >= 1; --l) {
    ops.matrices[static_cast<std::size_t>(l) - 1] = galerkin_coarse_matrix(
        ops.matrices[static_cast<std::size_t>(l)], hierarchy.prolongation_to(l),
        hierarchy.levels[static_cast<std::size_t>(l) - 1]);
  }
  ops.coarse_factor = CholeskyFactor::factor(ops.matrices.front());
  return ops;
}

void mg_cycle(const MultigridOperators& ops, int level, std::vector<double>& u,
              const std::vector<double>& f, int gamma, int pre_sweeps,
              int post_sweeps) {
  if (level == 0) {
    u = ops.coarse_factor.solve(f);
    return;
  }
  const SparseSymMatrix& a = ops.matrices[static_cast<std::size_t>(level)];
  const std::vector<double> diag = a.diagonal();
  std::vector<double> scratch(u.size(), 0.0);

  for (int s = 0; s < pre_sweeps; ++s) {
    jacobi_sweep(a, u, f, diag, ops.omega, scratch);
  }

  a.multiply(u, scratch);
  for (std::size_t i = 0; i < scratch.size(); ++i) scratch[i] = f[i] - scratch[i];
  std::vector<double> f_coarse = restrict(*ops.hierarchy, level, scratch);
  std::vector<double> u_coarse(f_coarse.size(), 0.0);

  const int visits = (level == ops.hierarchy->finest()) ? 1 : gamma;
  for (int t = 0; t < visits; ++t) {
    mg_cycle(ops, level - 1, u_coarse, f_coarse, gamma, pre_sweeps, post_sweeps);
  }

  const std::vector<double> correction = prolongate(*ops.hierarchy, level, u_coarse);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] += correction[i];

  for (int s = 0; s < post_sweeps; ++s) {
    jacobi_sweep(a, u, f, diag, ops.omega, scratch);
  }
}

SolveReport pcgmg_solve(const MultigridOperators& ops, const std::vector<double>& b,
                        const SolverConfig& cfg, const std::vector<double>* x0) {
  if (cfg.pre_sweeps != cfg.post_sweeps) {
    throw ConfigError("pcgmg needs pre_sweeps == post_sweeps for a symmetric "
                      "preconditioner");
  }
  const int finest = ops.hierarchy->finest();
  const Preconditioner precond = [&](const std::vector<double>& r) {
    std::vector<double> z(r.size(), 0.0);
    mg_cycle(ops, finest, z, r, cfg.gamma, cfg.pre_sweeps, cfg.post_sweeps);
    return z;
  };
  return pcg_solve(ops.matrices[static_cast<std::size_t>(finest)], b, precond,
                   cfg.tol, cfg.max_iter, x0);
}

}  // namespace topmg
