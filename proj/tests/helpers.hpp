#pragma once

// Shared test utilities: seeded random inputs, reference transforms, and
// tolerance helpers.  Everything takes the engine by reference so each test
// controls its own seed.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cscs/fft.hpp"
#include "cscs/toeplitz.hpp"
#include "cscs/types.hpp"

namespace testutil {

using cscs::Complex;
using cscs::ComplexVector;
using cscs::DenseMatrix;
using cscs::Index;

inline double rel_error(const DenseMatrix& got, const DenseMatrix& want) {
  const double scale = want.norm();
  return (got - want).norm() / (scale > 0.0 ? scale : 1.0);
}

inline Complex random_entry(std::mt19937_64& rng, bool real) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double re = u(rng);
  return {re, real ? 0.0 : u(rng)};
}

inline ComplexVector random_vector(std::mt19937_64& rng, Index n, bool real = false) {
  ComplexVector v(n);
  for (Index i = 0; i < n; ++i) v[i] = random_entry(rng, real);
  return v;
}

inline DenseMatrix random_matrix(std::mt19937_64& rng, Index n, Index m, bool real = false) {
  DenseMatrix a(n, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < n; ++i) a(i, j) = random_entry(rng, real);
  return a;
}

inline cscs::ToeplitzSpec random_toeplitz(std::mt19937_64& rng, Index n, bool real = false) {
  ComplexVector col = random_vector(rng, n, real);
  ComplexVector row = random_vector(rng, n, real);
  row[0] = col[0];
  return cscs::ToeplitzSpec(std::move(col), std::move(row));
}

// Random Toeplitz lifted along the diagonal until both splitting factors have
// spectral real part >= margin; keeps the CSCS convergence hypotheses valid.
inline cscs::ToeplitzSpec definite_toeplitz(std::mt19937_64& rng, Index n, double margin,
                                            bool real = false) {
  cscs::ToeplitzSpec t = random_toeplitz(rng, n, real);
  const auto [c, s] = cscs::cscs_split(t);
  const double c_min = cscs::circulant_eigenvalues(c).real().minCoeff();
  const double s_min = cscs::skew_circulant_eigenvalues(s).real().minCoeff();
  const double lift = 2.0 * std::max(0.0, margin - std::min(c_min, s_min));
  t.first_col[0] += lift;
  t.first_row[0] += lift;
  return t;
}

// O(n^2) reference for the repo's transform convention:
// y_j = n^{-1/2} sum_k x_k exp(-2 pi i j k / n).
inline ComplexVector naive_dft(const ComplexVector& x) {
  const Index n = x.size();
  ComplexVector y = ComplexVector::Zero(n);
  for (Index j = 0; j < n; ++j)
    for (Index k = 0; k < n; ++k) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(j) *
                         static_cast<double>(k) / static_cast<double>(n);
      y[j] += x[k] * Complex{std::cos(ang), std::sin(ang)};
    }
  return y / std::sqrt(static_cast<double>(n));
}

// Greedy nearest-neighbour multiset matching; returns the worst paired
// distance, or infinity on a size mismatch.
inline double spectrum_match_distance(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(static_cast<std::size_t>(b.size()), false);
  double worst = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    Index best_j = -1;
    for (Index j = 0; j < b.size(); ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double d = std::abs(a[i] - b[j]);
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    used[static_cast<std::size_t>(best_j)] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace testutil
