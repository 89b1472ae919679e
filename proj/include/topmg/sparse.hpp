#pragma once

#include <cstddef>
#include <vector>

namespace topmg {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Symmetric sparse matrix in compressed-row storage. Both triangles are
/// stored explicitly so row sweeps (smoothers, matvec) never need transpose
/// logic. Construction sums duplicate (row, col) entries.
class SparseSymMatrix {
 public:
  SparseSymMatrix() = default;

  static SparseSymMatrix from_triplets(int n, std::vector<Triplet> entries);

  // Adopts ready-made CSR arrays (cols sorted within each row).
  static SparseSymMatrix from_csr(int n, std::vector<int> row_offsets,
                                  std::vector<int> col_indices,
                                  std::vector<double> values);

  int size() const { return n_; }
  std::size_t nnz() const { return values_.size(); }

  // y = A x
  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
  std::vector<double> multiply(const std::vector<double>& x) const;

  // b - A x
  std::vector<double> residual(const std::vector<double>& b,
                               const std::vector<double>& x) const;

  std::vector<double> diagonal() const;

  // Stored value at (i, j); zero if the position is not in the pattern.
  double value_at(int i, int j) const;

  // max |A_ij - A_ji| <= rel_tol * max |A_ij|
  bool is_symmetric(double rel_tol = 1e-12) const;

  const std::vector<int>& row_offsets() const { return row_offsets_; }
  const std::vector<int>& col_indices() const { return col_indices_; }
  const std::vector<double>& values() const { return values_; }

 private:
  int n_ = 0;
  std::vector<int> row_offsets_;  // n+1
  std::vector<int> col_indices_;  // sorted within each row
  std::vector<double> values_;
};

// Small dense-vector helpers shared by the solvers.
double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);
// y += alpha * x
void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y);

}  // namespace topmg
