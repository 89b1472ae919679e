#include "topmg/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "topmg/errors.hpp"

namespace topmg {

SparseSymMatrix SparseSymMatrix::from_triplets(int n, std::vector<Triplet> entries) {
  for (const Triplet& t : entries) {
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) {
      throw DimensionError("triplet index (" + std::to_string(t.row) + ", " +
                           std::to_string(t.col) + ") outside matrix of size " +
                           std::to_string(n));
    }
  }
  // stable sort keeps duplicate summation order equal to insertion order,
  // which keeps mirrored entries bitwise symmetric
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });

  SparseSymMatrix m;
  m.n_ = n;
  m.row_offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  m.col_indices_.reserve(entries.size());
  m.values_.reserve(entries.size());

  std::size_t i = 0;
  while (i < entries.size()) {
    const int row = entries[i].row;
    const int col = entries[i].col;
    double sum = 0.0;
    while (i < entries.size() && entries[i].row == row && entries[i].col == col) {
      sum += entries[i].value;
      ++i;
    }
    m.col_indices_.push_back(col);
    m.values_.push_back(sum);
    m.row_offsets_[static_cast<std::size_t>(row) + 1] =
        static_cast<int>(m.values_.size());
  }
  // rows with no entries inherit the previous offset
  for (std::size_t r = 1; r < m.row_offsets_.size(); ++r) {
    m.row_offsets_[r] = std::max(m.row_offsets_[r], m.row_offsets_[r - 1]);
  }
  return m;
}

SparseSymMatrix SparseSymMatrix::from_csr(int n, std::vector<int> row_offsets,
                                          std::vector<int> col_indices,
                                          std::vector<double> values) {
  if (static_cast<int>(row_offsets.size()) != n + 1 ||
      col_indices.size() != values.size() ||
      row_offsets.back() != static_cast<int>(values.size())) {
    throw DimensionError("from_csr: inconsistent CSR arrays");
  }
  SparseSymMatrix m;
  m.n_ = n;
  m.row_offsets_ = std::move(row_offsets);
  m.col_indices_ = std::move(col_indices);
  m.values_ = std::move(values);
  return m;
}

void SparseSymMatrix::multiply(const std::vector<double>& x,
                               std::vector<double>& y) const {
  if (static_cast<int>(x.size()) != n_) {
    throw DimensionError("matvec: vector length " + std::to_string(x.size()) +
                         " does not match matrix size " + std::to_string(n_));
  }
  y.assign(static_cast<std::size_t>(n_), 0.0);
  const int* cols = col_indices_.data();
  const double* vals = values_.data();
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      s += vals[k] * x[static_cast<std::size_t>(cols[k])];
    }
    y[static_cast<std::size_t>(i)] = s;
  }
}

std::vector<double> SparseSymMatrix::multiply(const std::vector<double>& x) const {
  std::vector<double> y;
  multiply(x, y);
  return y;
}

std::vector<double> SparseSymMatrix::residual(const std::vector<double>& b,
                                              const std::vector<double>& x) const {
  std::vector<double> r = multiply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return r;
}

std::vector<double> SparseSymMatrix::diagonal() const {
  std::vector<double> d(static_cast<std::size_t>(n_), 0.0);
  for (int i = 0; i < n_; ++i) {
    d[static_cast<std::size_t>(i)] = value_at(i, i);
  }
  return d;
}

double SparseSymMatrix::value_at(int i, int j) const {
  const int* begin = col_indices_.data() + row_offsets_[i];
  const int* end = col_indices_.data() + row_offsets_[i + 1];
  const int* it = std::lower_bound(begin, end, j);
  if (it != end && *it == j) {
    return values_[static_cast<std::size_t>(it - col_indices_.data())];
  }
  return 0.0;
}

bool SparseSymMatrix::is_symmetric(double rel_tol) const {
  double max_abs = 0.0;
  for (double v : values_) max_abs = std::max(max_abs, std::abs(v));
  const double tol = rel_tol * std::max(max_abs, 1e-300);
  for (int i = 0; i < n_; ++i) {
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      const int j = col_indices_[static_cast<std::size_t>(k)];
      if (std::abs(values_[static_cast<std::size_t>(k)] - value_at(j, i)) > tol) {
        return false;
      }
    }
  }
  return true;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace topmg
