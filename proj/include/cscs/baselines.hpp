#pragma once

// Comparison solvers for AX + XB = C with dense coefficients: the
// Hermitian/skew-Hermitian splitting iteration, a block SSOR sweep pair, a
// Schur-based direct solve, and a brute-force Kronecker oracle.  These are
// deliberately plain dense implementations; the structured solver lives in
// solver.hpp.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "cscs/solver.hpp"
#include "cscs/types.hpp"

namespace cscs {

namespace detail {

inline DenseMatrix dense_residual(const DenseMatrix& a, const DenseMatrix& b,
                                  const DenseMatrix& c, const DenseMatrix& x) {
  return c - a * x - x * b;
}

inline void require_square_system(const DenseMatrix& a, const DenseMatrix& b,
                                  const DenseMatrix& c, const char* who) {
  if (a.rows() != a.cols() || b.rows() != b.cols())
    throw std::invalid_argument(std::string(who) + ": coefficients must be square");
  if (c.rows() != a.rows() || c.cols() != b.rows())
    throw std::invalid_argument(std::string(who) + ": C must be A.rows x B.rows");
}

}  // namespace detail

// K = H + S with H Hermitian and S skew-Hermitian, each unitarily
// diagonalized (S via the Hermitian matrix iS, so its eigenvalues come out
// purely imaginary).
struct HermitianSplit {
  DenseMatrix hermitian;
  DenseMatrix skew;
  DenseMatrix hermitian_basis;   // unitary, hermitian = Q diag(eigs) Q^*
  DenseMatrix skew_basis;
  ComplexVector hermitian_eigs;  // real values
  ComplexVector skew_eigs;       // purely imaginary values

  explicit HermitianSplit(const DenseMatrix& k) {
    if (k.rows() != k.cols()) throw std::invalid_argument("HermitianSplit: matrix must be square");
    hermitian = 0.5 * (k + k.adjoint());
    skew = 0.5 * (k - k.adjoint());

    Eigen::SelfAdjointEigenSolver<DenseMatrix> eh(hermitian);
    if (eh.info() != Eigen::Success)
      throw std::runtime_error("HermitianSplit: Hermitian eigendecomposition failed");
    hermitian_basis = eh.eigenvectors();
    hermitian_eigs = eh.eigenvalues().cast<Complex>();

    Eigen::SelfAdjointEigenSolver<DenseMatrix> es((Complex(0, 1) * skew).eval());
    if (es.info() != Eigen::Success)
      throw std::runtime_error("HermitianSplit: skew eigendecomposition failed");
    skew_basis = es.eigenvectors();
    skew_eigs = es.eigenvalues().cast<Complex>() * Complex(0, -1);
  }
};

struct HssOptions {
  std::optional<double> alpha;
  std::optional<double> beta;
  double tol = 1e-6;
  int max_iterations = 5000;
  double shift_multiplier = 1.0;
};

// HSS iteration: same alternating two-half-step shape as the CSCS sweep, but
// splitting into Hermitian and skew-Hermitian parts and diagonalizing them
// densely.  Default shifts reuse select_shifts on this splitting's spectra.
inline SolveReport hss_solve(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& c,
                             const HssOptions& opts = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  detail::require_square_system(a, b, c, "hss_solve");
  if (opts.alpha.has_value() != opts.beta.has_value())
    throw std::invalid_argument("hss_solve: give both shifts or neither");
  if (!(opts.tol > 0.0) || opts.max_iterations < 1)
    throw std::invalid_argument("hss_solve: bad tolerance or iteration cap");

  const bool real_inputs = detail::is_real(a) && detail::is_real(b) && detail::is_real(c);

  HermitianSplit ha(a), hb(b);
  double alpha, beta;
  if (opts.alpha) {
    alpha = *opts.alpha;
    beta = *opts.beta;
    if (!(alpha > 0.0) || !(beta > 0.0))
      throw std::invalid_argument("hss_solve: shifts must be positive");
  } else {
    auto [ct, st] = kron_spectra(ha.hermitian_eigs, hb.hermitian_eigs, ha.skew_eigs, hb.skew_eigs);
    const ShiftSelection sel = select_shifts(ct, st);
    alpha = beta = 0.5 * sel.gamma_star * opts.shift_multiplier;
  }

  const Index n = a.rows(), m = b.rows();
  auto build_denoms = [&](const ComplexVector& ea, const ComplexVector& eb, const char* which) {
    DenseMatrix d(n, m);
    for (Index j = 0; j < m; ++j)
      for (Index i = 0; i < n; ++i) {
        const Complex den = (alpha + ea[i]) + (beta + eb[j]);
        if (std::abs(den) <
            detail::solvability_floor(std::abs(alpha + ea[i]), std::abs(beta + eb[j])))
          throw BreakdownError(std::string("hss_solve: ") + which +
                               " half-step denominator below solvability floor");
        d(i, j) = den;
      }
    return d;
  };
  const DenseMatrix denom_h = build_denoms(ha.hermitian_eigs, hb.hermitian_eigs, "Hermitian");
  const DenseMatrix denom_s = build_denoms(ha.skew_eigs, hb.skew_eigs, "skew");

  DenseMatrix x = DenseMatrix::Zero(n, m);
  const double cnorm = c.norm();
  const double denom0 = cnorm > 0.0 ? cnorm : 1.0;

  SolveReport rep;
  rep.alpha = alpha;
  rep.beta = beta;

  DenseMatrix r = detail::dense_residual(a, b, c, x);
  double rel = r.norm() / denom0;
  rep.residual_history.push_back(rel);

  if (rel <= opts.tol) {
    rep.status = SolveStatus::converged;
  } else {
    for (int k = 1; k <= opts.max_iterations; ++k) {
      DenseMatrix g = ha.hermitian_basis.adjoint() * r * hb.hermitian_basis;
      g = g.cwiseQuotient(denom_h);
      x += ha.hermitian_basis * g * hb.hermitian_basis.adjoint();

      r = detail::dense_residual(a, b, c, x);
      g = ha.skew_basis.adjoint() * r * hb.skew_basis;
      g = g.cwiseQuotient(denom_s);
      x += ha.skew_basis * g * hb.skew_basis.adjoint();

      r = detail::dense_residual(a, b, c, x);
      rel = r.norm() / denom0;
      rep.residual_history.push_back(rel);
      rep.iterations = k;
      if (rel <= opts.tol) {
        rep.status = SolveStatus::converged;
        break;
      }
    }
  }

  rep.x = std::move(x);
  if (real_inputs) detail::realify(rep.x);
  rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// M = D + L + U, strict triangles; the sum reproduces M exactly because the
// parts are copied, never recomputed.
struct TriangularSplit {
  ComplexVector diagonal;
  DenseMatrix strictly_lower;
  DenseMatrix strictly_upper;

  explicit TriangularSplit(const DenseMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("TriangularSplit: matrix must be square");
    diagonal = m.diagonal();
    strictly_lower = m.template triangularView<Eigen::StrictlyLower>();
    strictly_upper = m.template triangularView<Eigen::StrictlyUpper>();
  }
};

struct BssorOptions {
  double omega = 1.0;
  double tol = 1e-6;
  int max_iterations = 5000;
};

// Block SSOR pair of sweeps: a forward column sweep against (D1/w + L1, D2/w + U2),
// then a backward row sweep with the triangle roles reversed.  Diverging
// residuals (relative > 1e8, or non-finite) end with status breakdown.
inline SolveReport bssor_solve(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& c,
                               const BssorOptions& opts = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  detail::require_square_system(a, b, c, "bssor_solve");
  if (!(opts.omega > 0.0) || !(opts.omega < 2.0))
    throw std::invalid_argument("bssor_solve: omega must lie in (0, 2)");
  if (!(opts.tol > 0.0) || opts.max_iterations < 1)
    throw std::invalid_argument("bssor_solve: bad tolerance or iteration cap");

  const bool real_inputs = detail::is_real(a) && detail::is_real(b) && detail::is_real(c);

  TriangularSplit ta(a), tb(b);
  if ((ta.diagonal.array() == Complex(0, 0)).any() || (tb.diagonal.array() == Complex(0, 0)).any())
    throw std::invalid_argument("bssor_solve: zero diagonal entry");

  const Index n = a.rows(), m = b.rows();
  const ComplexVector da = ta.diagonal / opts.omega;
  const ComplexVector db = tb.diagonal / opts.omega;

  DenseMatrix lower_a = ta.strictly_lower;  // diagonals patched in per sweep
  DenseMatrix upper_b2 = tb.strictly_lower.transpose();  // (D2/w + L2)^T shape, upper

  DenseMatrix x = DenseMatrix::Zero(n, m);
  const double cnorm = c.norm();
  const double denom0 = cnorm > 0.0 ? cnorm : 1.0;

  SolveReport rep;

  DenseMatrix r = detail::dense_residual(a, b, c, x);
  double rel = r.norm() / denom0;
  rep.residual_history.push_back(rel);

  DenseMatrix z(n, m);
  if (rel <= opts.tol) {
    rep.status = SolveStatus::converged;
  } else {
    for (int k = 1; k <= opts.max_iterations; ++k) {
      // (D1/w + L1) Z + Z (D2/w + U2) = R: column j depends on columns < j
      z.setZero();
      for (Index j = 0; j < m; ++j) {
        ComplexVector rhs = r.col(j);
        if (j > 0) rhs.noalias() -= z.leftCols(j) * tb.strictly_upper.block(0, j, j, 1);
        lower_a.diagonal() = da.array() + db[j];
        z.col(j) = lower_a.triangularView<Eigen::Lower>().solve(rhs);
      }
      x += z;
      r = detail::dense_residual(a, b, c, x);

      // (D1/w + U1) Z + Z (D2/w + L2) = R: row i depends on rows > i
      z.setZero();
      for (Index i = n - 1; i >= 0; --i) {
        Eigen::RowVectorXcd rhs = r.row(i);
        const Index tail = n - 1 - i;
        if (tail > 0)
          rhs.noalias() -= ta.strictly_upper.row(i).segment(i + 1, tail) * z.bottomRows(tail);
        upper_b2.diagonal() = db.array() + da[i];
        z.row(i) = upper_b2.triangularView<Eigen::Upper>().solve(rhs.transpose()).transpose();
      }
      x += z;
      r = detail::dense_residual(a, b, c, x);

      rel = r.norm() / denom0;
      rep.residual_history.push_back(rel);
      rep.iterations = k;
      if (rel <= opts.tol) {
        rep.status = SolveStatus::converged;
        break;
      }
      if (!std::isfinite(rel) || rel > 1e8) {
        rep.status = SolveStatus::breakdown;
        break;
      }
    }
  }

  rep.x = std::move(x);
  if (real_inputs) detail::realify(rep.x);
  rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// Direct solve by unitary reduction: lower complex Schur form of A (via the
// Schur form of A^*), upper of B, then column-by-column forward substitution.
// Near-common eigenvalues of A and -B surface as SingularEquationError.
inline DenseMatrix bartels_stewart_solve(const DenseMatrix& a, const DenseMatrix& b,
                                         const DenseMatrix& c) {
  detail::require_square_system(a, b, c, "bartels_stewart_solve");
  const bool real_inputs = detail::is_real(a) && detail::is_real(b) && detail::is_real(c);
  const Index n = a.rows(), m = b.rows();

  Eigen::ComplexSchur<DenseMatrix> schur_a(a.adjoint());
  if (schur_a.info() != Eigen::Success)
    throw std::runtime_error("bartels_stewart_solve: Schur of A failed");
  Eigen::ComplexSchur<DenseMatrix> schur_b(b);
  if (schur_b.info() != Eigen::Success)
    throw std::runtime_error("bartels_stewart_solve: Schur of B failed");

  const DenseMatrix q1 = schur_a.matrixU();
  const DenseMatrix t1 = schur_a.matrixT().adjoint();  // lower triangular
  const DenseMatrix& q2 = schur_b.matrixU();
  const DenseMatrix& t2 = schur_b.matrixT();           // upper triangular

  DenseMatrix ct = q1.adjoint() * c * q2;
  DenseMatrix y(n, m);
  for (Index k = 0; k < m; ++k) {
    ComplexVector rhs = ct.col(k);
    if (k > 0) rhs.noalias() -= y.leftCols(k) * t2.block(0, k, k, 1);
    const Complex shift = t2(k, k);
    for (Index i = 0; i < n; ++i) {
      Complex s = rhs[i];
      if (i > 0) s -= (t1.row(i).head(i) * y.col(k).head(i)).value();
      const Complex piv = t1(i, i) + shift;
      if (std::abs(piv) < detail::solvability_floor(std::abs(t1(i, i)), std::abs(shift)))
        throw SingularEquationError(
            "bartels_stewart_solve: A and -B share an eigenvalue (to working precision)");
      y(i, k) = s / piv;
    }
  }
  DenseMatrix x = q1 * y * q2.adjoint();
  if (real_inputs) detail::realify(x);
  return x;
}

// vec-system oracle: assembles (I (x) A + B^T (x) I) and solves it densely.
// Ground truth for everything else; guarded to tiny sizes.
inline DenseMatrix kron_oracle_solve(const DenseMatrix& a, const DenseMatrix& b,
                                     const DenseMatrix& c) {
  detail::require_square_system(a, b, c, "kron_oracle_solve");
  const Index n = a.rows(), m = b.rows();
  if (n * m > 4096) throw std::invalid_argument("kron_oracle_solve: nm exceeds the 4096 guard");
  const bool real_inputs = detail::is_real(a) && detail::is_real(b) && detail::is_real(c);

  const DenseMatrix k = detail::kron(DenseMatrix::Identity(m, m), a) +
                        detail::kron(b.transpose(), DenseMatrix::Identity(n, n));
  Eigen::FullPivLU<DenseMatrix> lu(k);
  if (!lu.isInvertible())
    throw SingularEquationError("kron_oracle_solve: Kronecker-sum operator is singular");
  const Eigen::Map<const ComplexVector> vec_c(c.data(), n * m);
  const ComplexVector vec_x = lu.solve(vec_c);
  DenseMatrix x = Eigen::Map<const DenseMatrix>(vec_x.data(), n, m);
  if (real_inputs) detail::realify(x);
  return x;
}

}  // namespace cscs
