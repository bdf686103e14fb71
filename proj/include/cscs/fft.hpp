#pragma once

// Unitary DFT plans plus the column/row transforms used to move matrices in
// and out of circulant and skew-circulant eigenbases.
//
// Convention, fixed repo-wide: the forward transform is
//   (F x)_j = n^{-1/2} * sum_k x_k * exp(-2*pi*i*j*k/n),
// the inverse is its adjoint.  F is symmetric, so transforming the rows of M
// by F is the right-multiplication M*F.  Eigenvalue ORDER everywhere in this
// library is the order this transform produces.

#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "cscs/types.hpp"

namespace cscs {

enum class TransformDirection { forward, inverse };

namespace detail {

// Immutable twiddle state for one length, shared by every plan of that
// length.  Power-of-two lengths run a plain iterative Cooley-Tukey; anything
// else goes through Bluestein's chirp-z reduction to a power of two.
struct FftTables {
  Index n = 0;
  bool pow2 = false;

  // radix-2 path (also used as the convolution engine for Bluestein)
  Index m = 0;                      // transform length actually run, power of two
  std::vector<std::uint32_t> rev;   // bit-reversal permutation of length m
  std::vector<Complex> twiddle;     // exp(-2*pi*i*k/m), k < m/2

  // Bluestein path
  std::vector<Complex> chirp;       // exp(-i*pi*k^2/n), k < n
  std::vector<Complex> kernel_fft;  // forward FFT (length m) of the chirp kernel

  explicit FftTables(Index length);

  void raw_pow2_forward(Complex* a) const;  // unnormalized, in place, length m
  void forward_unnormalized(Complex* x, std::vector<Complex>& scratch) const;
};

inline bool is_pow2(Index n) { return n > 0 && (n & (n - 1)) == 0; }

// exp(i*pi*k^2/n) with the square reduced mod 2n first, so the trig argument
// stays in [0, 2*pi) and keeps full precision for any k.
inline Complex chirp_root(std::uint64_t k, std::uint64_t n, double sign) {
  const std::uint64_t q = (k * k) % (2 * n);
  const double ang = sign * std::numbers::pi * static_cast<double>(q) / static_cast<double>(n);
  return {std::cos(ang), std::sin(ang)};
}

inline FftTables::FftTables(Index length) : n(length) {
  if (n < 1) throw std::invalid_argument("transform length must be positive");
  pow2 = is_pow2(n);
  m = pow2 ? n : [&] {
    Index p = 1;
    while (p < 2 * n - 1) p <<= 1;
    return p;
  }();

  rev.resize(static_cast<std::size_t>(m));
  int bits = 0;
  while ((Index{1} << bits) < m) ++bits;
  for (Index i = 0; i < m; ++i) {
    std::uint32_t r = 0;
    for (int b = 0; b < bits; ++b)
      if (i >> b & 1) r |= std::uint32_t{1} << (bits - 1 - b);
    rev[static_cast<std::size_t>(i)] = r;
  }
  twiddle.resize(static_cast<std::size_t>(m / 2));
  for (Index k = 0; k < m / 2; ++k) {
    const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
    twiddle[static_cast<std::size_t>(k)] = {std::cos(ang), std::sin(ang)};
  }

  if (!pow2) {
    chirp.resize(static_cast<std::size_t>(n));
    for (Index k = 0; k < n; ++k)
      chirp[static_cast<std::size_t>(k)] =
          chirp_root(static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(n), -1.0);
    // kernel b_l = conj(chirp_l) laid out cyclically for l in (-n, n)
    std::vector<Complex> c(static_cast<std::size_t>(m), Complex{0.0, 0.0});
    for (Index l = 0; l < n; ++l) {
      const Complex b = std::conj(chirp[static_cast<std::size_t>(l)]);
      c[static_cast<std::size_t>(l)] = b;
      if (l > 0) c[static_cast<std::size_t>(m - l)] = b;
    }
    raw_pow2_forward(c.data());
    kernel_fft = std::move(c);
  }
}

inline void FftTables::raw_pow2_forward(Complex* a) const {
  for (Index i = 0; i < m; ++i) {
    const Index j = static_cast<Index>(rev[static_cast<std::size_t>(i)]);
    if (i < j) std::swap(a[i], a[j]);
  }
  for (Index len = 2; len <= m; len <<= 1) {
    const Index half = len / 2;
    const Index step = m / len;
    for (Index s = 0; s < m; s += len) {
      for (Index k = 0; k < half; ++k) {
        const Complex w = twiddle[static_cast<std::size_t>(k * step)];
        const Complex u = a[s + k];
        const Complex v = a[s + k + half] * w;
        a[s + k] = u + v;
        a[s + k + half] = u - v;
      }
    }
  }
}

inline void FftTables::forward_unnormalized(Complex* x, std::vector<Complex>& scratch) const {
  if (n == 1) return;
  if (pow2) {
    raw_pow2_forward(x);
    return;
  }
  // Bluestein: X_j = chirp_j * (a (*) b)_j with a_k = x_k * chirp_k.
  scratch.assign(static_cast<std::size_t>(m), Complex{0.0, 0.0});
  for (Index k = 0; k < n; ++k)
    scratch[static_cast<std::size_t>(k)] = x[k] * chirp[static_cast<std::size_t>(k)];
  raw_pow2_forward(scratch.data());
  for (Index k = 0; k < m; ++k) {
    // cyclic convolution theorem; the inverse FFT below is conj-forward-conj
    scratch[static_cast<std::size_t>(k)] =
        std::conj(scratch[static_cast<std::size_t>(k)] * kernel_fft[static_cast<std::size_t>(k)]);
  }
  raw_pow2_forward(scratch.data());
  const double inv_m = 1.0 / static_cast<double>(m);
  for (Index j = 0; j < n; ++j)
    x[j] = std::conj(scratch[static_cast<std::size_t>(j)]) * inv_m * chirp[static_cast<std::size_t>(j)];
}

}  // namespace detail

// Reusable, immutable, cheap to copy.  apply() is exactly unitary: no hidden
// sqrt(n) factors leak into callers.
class TransformPlan {
 public:
  TransformPlan(Index length, TransformDirection direction)
      : tables_(std::make_shared<const detail::FftTables>(length)), direction_(direction) {}

  Index length() const { return tables_->n; }
  TransformDirection direction() const { return direction_; }

  // Same tables, opposite direction.
  TransformPlan reversed() const {
    TransformPlan p(*this);
    p.direction_ = direction_ == TransformDirection::forward ? TransformDirection::inverse
                                                             : TransformDirection::forward;
    return p;
  }

  void apply_in_place(std::span<Complex> x) const {
    if (static_cast<Index>(x.size()) != tables_->n)
      throw std::invalid_argument("TransformPlan: length mismatch");
    std::vector<Complex> scratch;
    const double scale = 1.0 / std::sqrt(static_cast<double>(tables_->n));
    if (direction_ == TransformDirection::forward) {
      tables_->forward_unnormalized(x.data(), scratch);
    } else {
      for (auto& v : x) v = std::conj(v);
      tables_->forward_unnormalized(x.data(), scratch);
      for (auto& v : x) v = std::conj(v);
    }
    for (auto& v : x) v *= scale;
  }

  ComplexVector apply(ComplexVector x) const {
    apply_in_place(std::span<Complex>(x.data(), static_cast<std::size_t>(x.size())));
    return x;
  }

 private:
  std::shared_ptr<const detail::FftTables> tables_;
  TransformDirection direction_;
};

// Diagonal of D = diag(1, w, w^2, ...), w = exp(i*pi/n): the modulation that
// turns a skew-circulant into a circulant by similarity.
struct ModulationVector {
  ComplexVector values;

  static ModulationVector for_length(Index n) {
    if (n < 1) throw std::invalid_argument("ModulationVector: length must be positive");
    ModulationVector d;
    d.values.resize(n);
    for (Index k = 0; k < n; ++k) {
      const double ang = std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      d.values[k] = {std::cos(ang), std::sin(ang)};
    }
    return d;
  }
};

namespace detail {

inline void require_plan(const TransformPlan& plan, TransformDirection dir, Index len,
                         const char* what) {
  if (plan.direction() != dir) throw std::invalid_argument(std::string(what) + ": wrong plan direction");
  if (plan.length() != len) throw std::invalid_argument(std::string(what) + ": plan length mismatch");
}

inline void transform_columns_in_place(DenseMatrix& M, const TransformPlan& plan) {
  for (Index j = 0; j < M.cols(); ++j)
    plan.apply_in_place(std::span<Complex>(M.col(j).data(), static_cast<std::size_t>(M.rows())));
}

}  // namespace detail

// Forward transform down each column: F * M.
inline DenseMatrix dft_columns(DenseMatrix M, const TransformPlan& plan) {
  detail::require_plan(plan, TransformDirection::forward, M.rows(), "dft_columns");
  detail::transform_columns_in_place(M, plan);
  return M;
}

// Inverse transform down each column: F^* * M.
inline DenseMatrix idft_columns(DenseMatrix M, const TransformPlan& plan) {
  detail::require_plan(plan, TransformDirection::inverse, M.rows(), "idft_columns");
  detail::transform_columns_in_place(M, plan);
  return M;
}

// Forward transform along each row.  F is symmetric, so this is M * F.
inline DenseMatrix dft_rows(const DenseMatrix& M, const TransformPlan& plan) {
  detail::require_plan(plan, TransformDirection::forward, M.cols(), "dft_rows");
  DenseMatrix T = M.transpose();
  detail::transform_columns_in_place(T, plan);
  return T.transpose();
}

// Inverse transform along each row: M * F^*.
inline DenseMatrix idft_rows(const DenseMatrix& M, const TransformPlan& plan) {
  detail::require_plan(plan, TransformDirection::inverse, M.cols(), "idft_rows");
  DenseMatrix T = M.transpose();
  detail::transform_columns_in_place(T, plan);
  return T.transpose();
}

enum class Side { left, right };
enum class ConjugationDirection { forward, adjoint };

// One-sided factor of the similarity F * M * F^*.  `forward` applies the
// factor that appears in F*M*F^* on the requested side; `adjoint` undoes it.
// `plan` must be a forward plan for the matching dimension.
inline DenseMatrix conj_circulant_basis(const DenseMatrix& M, Side side, ConjugationDirection dir,
                                        const TransformPlan& plan) {
  if (side == Side::left) {
    return dir == ConjugationDirection::forward ? dft_columns(M, plan)
                                                : idft_columns(M, plan.reversed());
  }
  return dir == ConjugationDirection::forward ? idft_rows(M, plan.reversed())
                                              : dft_rows(M, plan);
}

// Skew-circulant analogue: the basis is Fhat = F * D, so each factor is the
// circulant one composed with an entrywise modulation by D or conj(D).
inline DenseMatrix conj_skew_basis(const DenseMatrix& M, Side side, ConjugationDirection dir,
                                   const TransformPlan& plan, const ModulationVector& mod) {
  const Index len = side == Side::left ? M.rows() : M.cols();
  if (mod.values.size() != len) throw std::invalid_argument("conj_skew_basis: modulation length mismatch");
  if (side == Side::left) {
    if (dir == ConjugationDirection::forward) {
      DenseMatrix T = mod.values.asDiagonal() * M;  // Fhat*M = F*(D*M)
      return dft_columns(std::move(T), plan);
    }
    DenseMatrix T = idft_columns(M, plan.reversed());  // Fhat^**M = D^**(F^**M)
    return mod.values.conjugate().asDiagonal() * T;
  }
  if (dir == ConjugationDirection::forward) {
    DenseMatrix T = M * mod.values.conjugate().asDiagonal();  // M*Fhat^* = (M*D^*)*F^*
    return idft_rows(T, plan.reversed());
  }
  DenseMatrix T = dft_rows(M, plan);  // M*Fhat = (M*F)*D
  return T * mod.values.asDiagonal();
}

}  // namespace cscs
