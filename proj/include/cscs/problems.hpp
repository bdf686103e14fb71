#pragma once

// Benchmark problem generators.  Every generator is deterministic: identical
// parameters and seed reproduce the instance bit for bit (random draws go
// through an explicit 53-bit reduction, not a distribution object).

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cscs/toeplitz.hpp"
#include "cscs/types.hpp"

namespace cscs {

struct ProblemMeta {
  std::string generator;
  // flat numeric bag: grid sizes, velocities, h, seeds, applied shifts
  std::map<std::string, double> params;
};

struct ProblemInstance {
  ToeplitzSpec a;
  ToeplitzSpec b;
  DenseMatrix c;
  std::optional<DenseMatrix> x_true;
  ProblemMeta meta;
};

namespace detail {

class UniformSampler {
 public:
  explicit UniformSampler(std::uint64_t seed) : eng_(seed) {}
  // uniform [0,1) with an explicit reduction: bitwise stable across platforms
  double next() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 eng_;
};

// Row and column sums straight from the diagonals, O(n) each via a prefix
// over the diagonal index d in [-(n-1), n-1].
inline std::pair<ComplexVector, ComplexVector> toeplitz_row_col_sums(const ToeplitzSpec& t) {
  const Index n = t.n;
  std::vector<Complex> cum(static_cast<std::size_t>(2 * n - 1));
  Complex run{0.0, 0.0};
  for (Index k = 0; k < 2 * n - 1; ++k) {
    run += t.diagonal(k - (n - 1));
    cum[static_cast<std::size_t>(k)] = run;
  }
  auto cum_at = [&](Index d) {
    return d < -(n - 1) ? Complex{0.0, 0.0} : cum[static_cast<std::size_t>(d + n - 1)];
  };
  ComplexVector row_sums(n), col_sums(n);
  for (Index i = 0; i < n; ++i) row_sums[i] = cum_at(i) - cum_at(i - n);
  for (Index j = 0; j < n; ++j) col_sums[j] = cum_at(n - 1 - j) - cum_at(-j - 1);
  return {std::move(row_sums), std::move(col_sums)};
}

// C making X = ones the exact solution: C = A*ones + ones*B.
inline DenseMatrix ones_solution_rhs(const ToeplitzSpec& a, const ToeplitzSpec& b) {
  const ComplexVector row_sums = toeplitz_row_col_sums(a).first;
  const ComplexVector col_sums = toeplitz_row_col_sums(b).second;
  DenseMatrix c(a.n, b.n);
  for (Index j = 0; j < b.n; ++j)
    for (Index i = 0; i < a.n; ++i) c(i, j) = row_sums[i] + col_sums[j];
  return c;
}

inline DenseMatrix uniform_matrix(Index rows, Index cols, std::uint64_t seed) {
  UniformSampler s(seed);
  DenseMatrix c(rows, cols);
  for (Index j = 0; j < cols; ++j)  // column-major fill order, part of the contract
    for (Index i = 0; i < rows; ++i) c(i, j) = Complex{s.next(), 0.0};
  return c;
}

// h^2 * exp((i+j)*h) on the interior grid, 1-based indices.
inline DenseMatrix exp_grid_rhs(Index n, double h) {
  DenseMatrix c(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i)
      c(i, j) = h * h * std::exp(static_cast<double>(i + j + 2) * h);
  return c;
}

}  // namespace detail

enum class Example1Scheme { centered, upwind };

// 2-D convection-diffusion discretizations reduced to AX + XA^T = V.  The
// reduction needs the west/south and east/north stencil weights to match, so
// sigma must equal tau under either scheme; mismatched velocities are refused
// rather than silently rebalanced.
inline ProblemInstance convection_diffusion_example1(Index n, double sigma, double tau,
                                                     Example1Scheme scheme) {
  if (n < 1) throw std::invalid_argument("convection_diffusion_example1: n must be positive");
  if (sigma != tau)
    throw std::invalid_argument(
        "convection_diffusion_example1: the Sylvester reduction requires sigma == tau");
  if (scheme == Example1Scheme::upwind && sigma < 0.0)
    throw std::invalid_argument(
        "convection_diffusion_example1: upwind differencing needs nonnegative velocities");

  const double h = 1.0 / static_cast<double>(n + 1);
  double a, sub, super;
  if (scheme == Example1Scheme::centered) {
    a = 4.0;
    sub = -(1.0 + sigma * h / 2.0);
    super = -(1.0 - sigma * h / 2.0);
  } else {
    a = 4.0 + (sigma + tau) * h;
    sub = -(1.0 + sigma * h);
    super = -1.0;
  }

  ProblemInstance p{tridiagonal_toeplitz(n, sub, a / 2.0, super),
                    tridiagonal_toeplitz(n, super, a / 2.0, sub),  // B = A^T
                    detail::exp_grid_rhs(n, h),
                    std::nullopt,
                    {"example1",
                     {{"n", static_cast<double>(n)},
                      {"sigma", sigma},
                      {"tau", tau},
                      {"h", h},
                      {"upwind", scheme == Example1Scheme::upwind ? 1.0 : 0.0}}}};
  return p;
}

// Second centered discretization: A carries tau, B carries sigma, same
// exponential right-hand side.
inline ProblemInstance convection_diffusion_cd2(Index n, double sigma, double tau) {
  if (n < 1) throw std::invalid_argument("convection_diffusion_cd2: n must be positive");
  const double h = 1.0 / static_cast<double>(n + 1);
  ProblemInstance p{tridiagonal_toeplitz(n, -1.0 + tau * h / 2.0, 2.0, -1.0 - tau * h / 2.0),
                    tridiagonal_toeplitz(n, -1.0 + sigma * h / 2.0, 2.0, -1.0 - sigma * h / 2.0),
                    detail::exp_grid_rhs(n, h),
                    std::nullopt,
                    {"cd2",
                     {{"n", static_cast<double>(n)}, {"sigma", sigma}, {"tau", tau}, {"h", h}}}};
  return p;
}

// Five-diagonal Toeplitz coefficients of order n^2 and m^2 (centered stencil
// weights at offsets 0, +-1, +-grid), uniform random right-hand side.
inline ProblemInstance example2_instance(Index n, Index m, double sigma1, double sigma2,
                                         std::uint64_t seed) {
  if (n < 1 || m < 1) throw std::invalid_argument("example2_instance: grid sizes must be positive");

  auto five_diagonal = [](Index base, double sig) {
    const double h = 1.0 / static_cast<double>(base + 1);
    const double diag = 4.0;
    const double lower = -(1.0 + sig * h / 2.0);   // subdiagonal and -base-th diagonal
    const double upper = -(1.0 - sig * h / 2.0);   // superdiagonal and +base-th diagonal
    const Index order = base * base;
    ComplexVector col = ComplexVector::Zero(order), row = ComplexVector::Zero(order);
    col[0] = diag;
    row[0] = diag;
    if (order > 1) {
      col[1] = lower;
      row[1] = upper;
    }
    if (base < order) {
      col[base] = lower;
      row[base] = upper;
    }
    return ToeplitzSpec(std::move(col), std::move(row));
  };

  ToeplitzSpec a = five_diagonal(n, sigma1);
  ToeplitzSpec b = five_diagonal(m, sigma2);
  DenseMatrix c = detail::uniform_matrix(a.n, b.n, seed);
  ProblemInstance p{std::move(a),
                    std::move(b),
                    std::move(c),
                    std::nullopt,
                    {"example2",
                     {{"n", static_cast<double>(n)},
                      {"m", static_cast<double>(m)},
                      {"sigma1", sigma1},
                      {"sigma2", sigma2},
                      {"seed", static_cast<double>(seed)}}}};
  return p;
}

enum class Example3Rhs { known_solution, uniform_random };

// A = B = tridiag(-1+r, 2 + 100/(n+1)^2, -1-r).  Default right-hand side
// makes X = ones exact; the uniform-random mode draws a seeded C with
// entries in [0, 1).
inline ProblemInstance example3_instance(Index n, double r,
                                         Example3Rhs rhs = Example3Rhs::known_solution,
                                         std::uint64_t seed = 0) {
  if (n < 1) throw std::invalid_argument("example3_instance: n must be positive");
  const double np1 = static_cast<double>(n + 1);
  ToeplitzSpec a = tridiagonal_toeplitz(n, -1.0 + r, 2.0 + 100.0 / (np1 * np1), -1.0 - r);
  ToeplitzSpec b = a;

  ProblemInstance p{std::move(a), std::move(b), DenseMatrix(), std::nullopt,
                    {"example3",
                     {{"n", static_cast<double>(n)},
                      {"r", r},
                      {"random_rhs", rhs == Example3Rhs::uniform_random ? 1.0 : 0.0},
                      {"seed", static_cast<double>(seed)}}}};
  if (rhs == Example3Rhs::known_solution) {
    p.c = detail::ones_solution_rhs(p.a, p.b);
    p.x_true = DenseMatrix::Constant(n, n, Complex{1.0, 0.0});
  } else {
    p.c = detail::uniform_matrix(n, n, seed);
  }
  return p;
}

// A = B = (random circulant) + (random skew-circulant), each factor shifted
// just enough that its spectrum's real part clears `margin`; X = ones exact.
inline ProblemInstance example4_instance(Index n, std::uint64_t seed, double margin = 0.1) {
  if (n < 1) throw std::invalid_argument("example4_instance: n must be positive");
  if (!(margin >= 0.0)) throw std::invalid_argument("example4_instance: margin must be nonnegative");

  detail::UniformSampler s(seed);
  ComplexVector c_col(n), s_col(n);
  for (Index i = 0; i < n; ++i) c_col[i] = Complex{s.next(), 0.0};  // circulant drawn first
  for (Index i = 0; i < n; ++i) s_col[i] = Complex{s.next(), 0.0};

  // the splitting of the assembled matrix puts half its diagonal in each
  // factor, so the factors must share one diagonal entry and one shift or
  // they would not survive reassembly
  const Complex shared_head = 0.5 * (c_col[0] + s_col[0]);
  c_col[0] = shared_head;
  s_col[0] = shared_head;

  // a real shift of the shared head moves every eigenvalue of both factors
  // by the same amount; size it so every Gershgorin disc of either factor
  // lies in Re >= margin, which leaves the off-diagonal mass small against
  // the diagonal and keeps the iteration contractive at a size-independent
  // rate
  const double c_radius = c_col.tail(n - 1).cwiseAbs().sum();
  const double s_radius = s_col.tail(n - 1).cwiseAbs().sum();
  const double radius = std::max(c_radius, s_radius);
  const double mu = std::max(0.0, margin + radius - shared_head.real());
  c_col[0] += mu;
  s_col[0] += mu;

  ToeplitzSpec a = toeplitz_from_split(CirculantSpec(std::move(c_col)),
                                       SkewCirculantSpec(std::move(s_col)));
  ToeplitzSpec b = a;
  DenseMatrix c = detail::ones_solution_rhs(a, b);

  ProblemInstance p{std::move(a),
                    std::move(b),
                    std::move(c),
                    DenseMatrix::Constant(n, n, Complex{1.0, 0.0}),
                    {"example4",
                     {{"n", static_cast<double>(n)},
                      {"seed", static_cast<double>(seed)},
                      {"margin", margin},
                      {"mu_circulant", mu},
                      {"mu_skew", mu}}}};
  return p;
}

}  // namespace cscs
