#pragma once

#include <functional>
#include <string>
#include <vector>

#include "topmg/grid.hpp"
#include "topmg/sparse.hpp"

namespace topmg {

enum class Method { cholesky, jacobi, damped_jacobi, gauss_seidel, cg, pcgmg };
enum class SmootherKind { jacobi, damped_jacobi, gauss_seidel };

std::string method_name(Method m);

struct SolverConfig {
  Method method = Method::pcgmg;
  double tol = 1e-6;        // relative residual
  int max_iter = 1000;
  double omega = 0.6;       // damped-Jacobi weight
  int gamma = 1;            // 1 = V-cycle, 2 = W-cycle
  int pre_sweeps = 2;
  int post_sweeps = 2;
  int num_coarsenings = 2;

  void validate() const;  // throws ConfigError
};

struct SolveReport {
  std::vector<double> solution;
  int iterations = 0;
  double final_residual = 0.0;  // ||b - Ax|| / ||b||
  bool converged = false;
  double seconds = 0.0;
  std::vector<double> residual_history;  // entry 0 is the initial residual
};

/// Sparse Cholesky factor in envelope (profile) storage. Fill stays inside
/// the envelope, which is exactly the band for the lexicographic grid
/// numbering used here.
class CholeskyFactor {
 public:
  // Throws DefinitenessError naming the failing row if a pivot is <= 0.
  static CholeskyFactor factor(const SparseSymMatrix& a);

  std::vector<double> solve(const std::vector<double>& b) const;
  int size() const { return n_; }

  // reconstructed (L L^T)_{ij} for verification
  double product_entry(int i, int j) const;

 private:
  int n_ = 0;
  std::vector<int> first_;             // first envelope column of each row
  std::vector<std::size_t> offsets_;   // row i occupies [offsets_[i], offsets_[i+1])
  std::vector<double> values_;         // cols first_[i] .. i, diagonal last
};

/// Factor + forward/back substitution, timed, as one report.
SolveReport cholesky_solve_system(const SparseSymMatrix& a, const std::vector<double>& b);

/// One in-place sweep of the named stationary iteration. Gauss-Seidel updates
/// in ascending dof order; damped Jacobi with omega = 1 is plain Jacobi.
void smoother_sweep(const SparseSymMatrix& a, std::vector<double>& x,
                    const std::vector<double>& b, SmootherKind kind, double omega);

/// Repeats sweeps from x = 0 until the relative residual drops below tol.
SolveReport stationary_solve(const SparseSymMatrix& a, const std::vector<double>& b,
                             SmootherKind kind, double omega, double tol, int max_iter);

/// Plain conjugate gradients from x = 0 (or x0 when given).
SolveReport cg_solve(const SparseSymMatrix& a, const std::vector<double>& b,
                     double tol, int max_iter,
                     const std::vector<double>* x0 = nullptr);

using Preconditioner = std::function<std::vector<double>(const std::vector<double>&)>;

/// Preconditioned conjugate gradients; `precond` applies z = M^-1 r.
SolveReport pcg_solve(const SparseSymMatrix& a, const std::vector<double>& b,
                      const Preconditioner& precond, double tol, int max_iter,
                      const std::vector<double>* x0 = nullptr);

/// Galerkin coarse operator (1/4) P^T A P on the known nine-point coarse
/// node pattern.
SparseSymMatrix galerkin_coarse_matrix(const SparseSymMatrix& fine,
                                       const TransferOperator& p,
                                       const GridLevel& coarse);

/// Per-level operators for the multigrid cycle: Galerkin products of the fine
/// matrix plus a Cholesky factor of the coarsest level, built once and reused
/// for every cycle.
struct MultigridOperators {
  const GridHierarchy* hierarchy = nullptr;
  std::vector<SparseSymMatrix> matrices;  // coarsest first
  CholeskyFactor coarse_factor;
  double omega = 0.6;  // damped-Jacobi smoother weight
};

MultigridOperators build_multigrid_operators(const GridHierarchy& hierarchy,
                                             SparseSymMatrix fine_matrix,
                                             double omega);

/// One gamma-cycle at `level`, smoothing with damped Jacobi and solving the
/// coarsest level exactly. gamma is forced to 1 when called on the finest
/// grid; u is updated in place.
void mg_cycle(const MultigridOperators& ops, int level, std::vector<double>& u,
              const std::vector<double>& f, int gamma, int pre_sweeps,
              int post_sweeps);

/// Conjugate gradients preconditioned with one multigrid cycle per iteration.
SolveReport pcgmg_solve(const MultigridOperators& ops, const std::vector<double>& b,
                        const SolverConfig& cfg,
                        const std::vector<double>* x0 = nullptr);

}  // namespace topmg
