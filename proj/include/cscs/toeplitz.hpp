#pragma once

// Compact descriptors for Toeplitz, circulant and skew-circulant matrices,
// the circulant/skew-circulant splitting T = C + S, and the closed-form
// spectra of both factors.

#include <cmath>
#include <stdexcept>
#include <utility>

#include "cscs/fft.hpp"
#include "cscs/types.hpp"

namespace cscs {

// T[j][k] = t_{j-k}; first_col holds t_0..t_{n-1}, first_row holds
// t_0, t_{-1}, ..., t_{1-n}.  The shared corner entry must agree exactly.
struct ToeplitzSpec {
  Index n = 0;
  ComplexVector first_col;
  ComplexVector first_row;

  ToeplitzSpec() = default;
  ToeplitzSpec(ComplexVector col, ComplexVector row)
      : n(col.size()), first_col(std::move(col)), first_row(std::move(row)) {
    if (n < 1) throw std::invalid_argument("ToeplitzSpec: order must be positive");
    if (first_row.size() != n) throw std::invalid_argument("ToeplitzSpec: first_row length mismatch");
    if (first_col[0] != first_row[0])
      throw std::invalid_argument("ToeplitzSpec: first_col[0] != first_row[0]");
  }

  // diag(t) entry at signed offset: t(k) = t_k, k in (-n, n)
  Complex diagonal(Index k) const { return k >= 0 ? first_col[k] : first_row[-k]; }
};

inline ToeplitzSpec tridiagonal_toeplitz(Index n, Complex sub, Complex diag, Complex super) {
  ComplexVector col = ComplexVector::Zero(n), row = ComplexVector::Zero(n);
  col[0] = diag;
  row[0] = diag;
  if (n > 1) {
    col[1] = sub;
    row[1] = super;
  }
  return {std::move(col), std::move(row)};
}

struct CirculantSpec {
  Index n = 0;
  ComplexVector first_col;

  CirculantSpec() = default;
  explicit CirculantSpec(ComplexVector col) : n(col.size()), first_col(std::move(col)) {
    if (n < 1) throw std::invalid_argument("CirculantSpec: order must be positive");
  }
};

struct SkewCirculantSpec {
  Index n = 0;
  ComplexVector first_col;

  SkewCirculantSpec() = default;
  explicit SkewCirculantSpec(ComplexVector col) : n(col.size()), first_col(std::move(col)) {
    if (n < 1) throw std::invalid_argument("SkewCirculantSpec: order must be positive");
  }
};

// T = C + S with both factors inheriting half the main diagonal and the
// wrapped combinations (t_l +- t_{l-n})/2 elsewhere.  Exact by construction.
inline std::pair<CirculantSpec, SkewCirculantSpec> cscs_split(const ToeplitzSpec& t) {
  ComplexVector c(t.n), s(t.n);
  c[0] = 0.5 * t.first_col[0];
  s[0] = c[0];
  for (Index l = 1; l < t.n; ++l) {
    const Complex lower = t.first_col[l];       // t_l
    const Complex upper = t.first_row[t.n - l]; // t_{l-n}
    c[l] = 0.5 * (lower + upper);
    s[l] = 0.5 * (lower - upper);
  }
  return {CirculantSpec(std::move(c)), SkewCirculantSpec(std::move(s))};
}

// lambda_j = sum_k c_k exp(-2*pi*i*j*k/n): the unnormalized forward DFT of
// the first column, in transform order.
inline ComplexVector circulant_eigenvalues(const CirculantSpec& c, const TransformPlan& plan) {
  detail::require_plan(plan, TransformDirection::forward, c.n, "circulant_eigenvalues");
  ComplexVector lam = plan.apply(c.first_col);
  lam *= std::sqrt(static_cast<double>(c.n));
  return lam;
}

inline ComplexVector circulant_eigenvalues(const CirculantSpec& c) {
  return circulant_eigenvalues(c, TransformPlan(c.n, TransformDirection::forward));
}

// sigma_j = sum_k s_k d_k exp(-2*pi*i*j*k/n), d_k = exp(i*pi*k/n): same DFT
// after modulating the first column.
inline ComplexVector skew_circulant_eigenvalues(const SkewCirculantSpec& s, const TransformPlan& plan,
                                                const ModulationVector& mod) {
  detail::require_plan(plan, TransformDirection::forward, s.n, "skew_circulant_eigenvalues");
  if (mod.values.size() != s.n)
    throw std::invalid_argument("skew_circulant_eigenvalues: modulation length mismatch");
  ComplexVector modulated = s.first_col.cwiseProduct(mod.values);
  ComplexVector sig = plan.apply(std::move(modulated));
  sig *= std::sqrt(static_cast<double>(s.n));
  return sig;
}

inline ComplexVector skew_circulant_eigenvalues(const SkewCirculantSpec& s) {
  return skew_circulant_eigenvalues(s, TransformPlan(s.n, TransformDirection::forward),
                                    ModulationVector::for_length(s.n));
}

inline DenseMatrix to_dense(const ToeplitzSpec& t) {
  DenseMatrix M(t.n, t.n);
  for (Index j = 0; j < t.n; ++j)
    for (Index k = 0; k < t.n; ++k) M(j, k) = t.diagonal(j - k);
  return M;
}

inline DenseMatrix to_dense(const CirculantSpec& c) {
  DenseMatrix M(c.n, c.n);
  for (Index j = 0; j < c.n; ++j)
    for (Index k = 0; k < c.n; ++k) M(j, k) = c.first_col[(j - k + c.n) % c.n];
  return M;
}

inline DenseMatrix to_dense(const SkewCirculantSpec& s) {
  DenseMatrix M(s.n, s.n);
  for (Index j = 0; j < s.n; ++j)
    for (Index k = 0; k < s.n; ++k) {
      const Index d = j - k;
      M(j, k) = d >= 0 ? s.first_col[d] : -s.first_col[d + s.n];
    }
  return M;
}

// Toeplitz view of C + S; used by generators that assemble A from its parts.
inline ToeplitzSpec toeplitz_from_split(const CirculantSpec& c, const SkewCirculantSpec& s) {
  if (c.n != s.n) throw std::invalid_argument("toeplitz_from_split: order mismatch");
  const Index n = c.n;
  ComplexVector col(n), row(n);
  col[0] = c.first_col[0] + s.first_col[0];
  row[0] = col[0];
  for (Index k = 1; k < n; ++k) {
    col[k] = c.first_col[k] + s.first_col[k];
    row[k] = c.first_col[n - k] - s.first_col[n - k];  // t_{-k} = c_{n-k} - s_{n-k}
  }
  return {std::move(col), std::move(row)};
}

}  // namespace cscs
