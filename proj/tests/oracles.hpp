// Test-only reference implementations, independent of the library code paths
// they check: dense linear algebra, eigenvalues via Jacobi rotations, the
// closed-form Q4 matrices, and deterministic random SPD system generators.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "topmg/sparse.hpp"

namespace oracle {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform in [0, 1); fixed bit recipe so sequences never depend on the
  // standard library's distribution implementations
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int index(int n) { return static_cast<int>(gen_() % static_cast<std::uint64_t>(n)); }

  double normal() {
    // Box-Muller
    const double u1 = std::max(uniform(), 1e-300);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  std::mt19937_64 gen_;
};

struct Dense {
  int n = 0;
  std::vector<double> a;  // row-major

  explicit Dense(int size) : n(size), a(static_cast<std::size_t>(size) * size, 0.0) {}
  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

  std::vector<double> multiply(const std::vector<double>& x) const {
    std::vector<double> y(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += at(i, j) * x[static_cast<std::size_t>(j)];
      y[static_cast<std::size_t>(i)] = s;
    }
    return y;
  }
};

inline topmg::SparseSymMatrix to_sparse(const Dense& d) {
  std::vector<topmg::Triplet> ts;
  for (int i = 0; i < d.n; ++i) {
    for (int j = 0; j < d.n; ++j) {
      if (d.at(i, j) != 0.0) ts.push_back({i, j, d.at(i, j)});
    }
  }
  return topmg::SparseSymMatrix::from_triplets(d.n, std::move(ts));
}

// Random orthogonal matrix by Gram-Schmidt on a Gaussian matrix.
inline Dense random_orthogonal(int n, Rng& rng) {
  Dense q(n);
  for (double& v : q.a) v = rng.normal();
  // orthonormalize columns
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < j; ++k) {
      double proj = 0.0;
      for (int i = 0; i < n; ++i) proj += q.at(i, j) * q.at(i, k);
      for (int i = 0; i < n; ++i) q.at(i, j) -= proj * q.at(i, k);
    }
    double norm = 0.0;
    for (int i = 0; i < n; ++i) norm += q.at(i, j) * q.at(i, j);
    norm = std::sqrt(norm);
    for (int i = 0; i < n; ++i) q.at(i, j) /= norm;
  }
  return q;
}

// SPD matrix with a log-spaced spectrum in [1, condition]; the condition
// number is exact by construction.
inline Dense random_spd(int n, double condition, Rng& rng) {
  const Dense q = random_orthogonal(n, rng);
  std::vector<double> lambda(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    lambda[static_cast<std::size_t>(i)] = std::pow(condition, t);
  }
  Dense a(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        s += q.at(i, k) * lambda[static_cast<std::size_t>(k)] * q.at(j, k);
      }
      a.at(i, j) = s;
      a.at(j, i) = s;
    }
  }
  return a;
}

// SPD matrix whose spectrum has only `clusters` distinct values, log-spaced
// in [1, condition]. CG terminates after `clusters` iterations in exact
// arithmetic no matter how large n is.
inline Dense random_spd_clustered(int n, int clusters, double condition, Rng& rng) {
  const Dense q = random_orthogonal(n, rng);
  std::vector<double> lambda(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int c = rng.index(clusters);
    const double t = clusters == 1 ? 0.0 : static_cast<double>(c) / (clusters - 1);
    lambda[static_cast<std::size_t>(i)] = std::pow(condition, t);
  }
  Dense a(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        s += q.at(i, k) * lambda[static_cast<std::size_t>(k)] * q.at(j, k);
      }
      a.at(i, j) = s;
      a.at(j, i) = s;
    }
  }
  return a;
}

// Symmetric, strictly diagonally dominant (hence SPD) matrix; every classical
// splitting iteration converges on these.
inline Dense random_diag_dominant(int n, Rng& rng) {
  Dense a(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double v = rng.uniform(-1.0, 1.0);
      a.at(i, j) = v;
      a.at(j, i) = v;
    }
  }
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) row += std::abs(a.at(i, j));
    }
    a.at(i, i) = row + 0.5 + rng.uniform();
  }
  return a;
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> jacobi_eigenvalues(Dense a, int max_sweeps = 100) {
  const int n = a.n;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) off += a.at(i, j) * a.at(i, j);
    }
    if (off < 1e-24) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a.at(p, q);
        if (apq == 0.0) continue;
        const double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a.at(k, p), akq = a.at(k, q);
          a.at(k, p) = c * akp - s * akq;
          a.at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a.at(p, k), aqk = a.at(q, k);
          a.at(p, k) = c * apk - s * aqk;
          a.at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a.at(i, i);
  return ev;
}

// Closed-form plane-stress Q4 stiffness for a unit square element with dofs
// (u, v) per node, nodes counterclockwise from the lower-left corner.
inline std::vector<double> closed_form_q4(double e_mod, double nu) {
  const double k[8] = {
      0.5 - nu / 6.0,        0.125 + nu / 8.0,      -0.25 - nu / 12.0,
      -0.125 + 3.0 * nu / 8.0, -0.25 + nu / 12.0,   -0.125 - nu / 8.0,
      nu / 6.0,              0.125 - 3.0 * nu / 8.0};
  const int idx[8][8] = {
      {0, 1, 2, 3, 4, 5, 6, 7},
      {1, 0, 7, 6, 5, 4, 3, 2},
      {2, 7, 0, 5, 6, 3, 4, 1},
      {3, 6, 5, 0, 7, 2, 1, 4},
      {4, 5, 6, 7, 0, 1, 2, 3},
      {5, 4, 3, 2, 1, 0, 7, 6},
      {6, 3, 4, 1, 2, 7, 0, 5},
      {7, 2, 1, 4, 3, 6, 5, 0}};
  std::vector<double> m(64);
  const double c = e_mod / (1.0 - nu * nu);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      m[static_cast<std::size_t>(i * 8 + j)] = c * k[idx[i][j]];
    }
  }
  return m;
}

// Closed-form Q4 Laplacian element matrix on the unit square.
inline std::vector<double> closed_form_q4_laplace() {
  const double s = 1.0 / 6.0;
  return {4 * s, -1 * s, -2 * s, -1 * s,
          -1 * s, 4 * s, -1 * s, -2 * s,
          -2 * s, -1 * s, 4 * s, -1 * s,
          -1 * s, -2 * s, -1 * s, 4 * s};
}

}  // namespace oracle
