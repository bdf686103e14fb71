#pragma once

// CSCS iteration for AX + XB = C with Toeplitz A, B.
//
// Each sweep alternates two shifted Sylvester half-steps, one in the
// circulant eigenbasis and one in the skew-circulant eigenbasis; both are
// entrywise divisions after a two-sided transform, so a sweep costs a handful
// of column/row FFT passes.  The residual is recomputed from scratch between
// half-steps, never updated incrementally.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cscs/fft.hpp"
#include "cscs/toeplitz.hpp"
#include "cscs/types.hpp"

namespace cscs {

namespace detail {

// |denominator| below this is treated as a breakdown rather than divided by.
inline double solvability_floor(double lhs_mag, double rhs_mag) {
  return 1e3 * std::numeric_limits<double>::epsilon() * (1.0 + lhs_mag + rhs_mag);
}

inline bool is_real(const DenseMatrix& m) {
  return (m.imag().array() == 0.0).all();
}

inline bool is_real(const ToeplitzSpec& t) {
  return (t.first_col.imag().array() == 0.0).all() && (t.first_row.imag().array() == 0.0).all();
}

// Drop imaginary dust once a real-data solve is finished.
inline void realify(DenseMatrix& x) {
  const double thr = 1e-12 * x.norm();
  if (x.size() > 0 && x.imag().cwiseAbs().maxCoeff() <= thr) x.imag().setZero();
}

inline DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

}  // namespace detail

// Everything spectral about one Toeplitz coefficient: its two splitting
// factors, their closed-form eigenvalues, and the transforms that diagonalize
// them.  Plans are shared, so copies are cheap.
struct SpectralSplit {
  CirculantSpec circulant;
  SkewCirculantSpec skew;
  ModulationVector modulation;
  TransformPlan forward;
  TransformPlan inverse;
  ComplexVector circulant_eigs;
  ComplexVector skew_eigs;

  explicit SpectralSplit(const ToeplitzSpec& t)
      : modulation(ModulationVector::for_length(t.n)),
        forward(t.n, TransformDirection::forward),
        inverse(t.n, TransformDirection::inverse) {
    auto [c, s] = cscs_split(t);
    circulant = std::move(c);
    skew = std::move(s);
    circulant_eigs = circulant_eigenvalues(circulant, forward);
    skew_eigs = skew_circulant_eigenvalues(skew, forward, modulation);
  }

  Index order() const { return circulant.n; }
};

// Spectra of the Kronecker-sum operators: ctilde[j*n+i] = lam_a[i] + lam_b[j],
// same layout for the skew pair.
inline std::pair<ComplexVector, ComplexVector> kron_spectra(const ComplexVector& lam_a,
                                                            const ComplexVector& lam_b,
                                                            const ComplexVector& sig_a,
                                                            const ComplexVector& sig_b) {
  if (lam_a.size() != sig_a.size() || lam_b.size() != sig_b.size())
    throw std::invalid_argument("kron_spectra: eigenvalue vector sizes disagree");
  const Index n = lam_a.size(), m = lam_b.size();
  ComplexVector ct(n * m), st(n * m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < n; ++i) {
      ct[j * n + i] = lam_a[i] + lam_b[j];
      st[j * n + i] = sig_a[i] + sig_b[j];
    }
  return {std::move(ct), std::move(st)};
}

inline std::pair<ComplexVector, ComplexVector> kron_spectra(const SpectralSplit& a,
                                                            const SpectralSplit& b) {
  return kron_spectra(a.circulant_eigs, b.circulant_eigs, a.skew_eigs, b.skew_eigs);
}

// Outcome of the theory-driven shift choice.  `qualified` means the spectra
// satisfy the convergence theorem's hypotheses (both Kronecker-sum operators
// have nonnegative real spectrum, at least one strictly positive); otherwise
// no contraction guarantee attaches to gamma_star.
struct ShiftSelection {
  double theta_min = 0.0;   // extremes of the real parts over both spectra
  double theta_max = 0.0;
  double eta_min = 0.0;     // extremes of |imag| over both spectra
  double eta_max = 0.0;
  double eta_tilde = 0.0;   // branch threshold sqrt(theta_min*(theta_max-theta_min)/2)
  double gamma_star = 1.0;
  double sigma_star = 1.0;  // minimized box bound at gamma_star; 1 = no guarantee
  double alpha = 0.5;       // default split gamma_star/2 each
  double beta = 0.5;
  enum class Definiteness { qualified, fallback } definiteness = Definiteness::fallback;
};

// Two-branch minimizer of the box bound
//   g(gamma) = max over [theta_min,theta_max] x [0,eta_max] of
//              ((gamma-theta)^2 + eta^2) / ((gamma+theta)^2 + eta^2)
// over gamma > 0, evaluated on the extremes of the supplied spectra.
// A genuinely negative theta_min (or a degenerate gamma_star <= 0) falls back
// to gamma_star = 1.  Zero eigenvalues of a positive-semidefinite factor come
// out of the FFT with O(eps) noise; real-part minima that negative-tiny are
// snapped to the semidefinite boundary instead of tripping the fallback.
inline ShiftSelection select_shifts(const ComplexVector& ctilde, const ComplexVector& stilde) {
  if (ctilde.size() == 0 || stilde.size() == 0)
    throw std::invalid_argument("select_shifts: empty spectrum");

  auto scan = [](const ComplexVector& v, double& re_min, double& re_max, double& im_min,
                 double& im_max) {
    re_min = im_min = std::numeric_limits<double>::infinity();
    re_max = im_max = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < v.size(); ++i) {
      re_min = std::min(re_min, v[i].real());
      re_max = std::max(re_max, v[i].real());
      const double a = std::abs(v[i].imag());
      im_min = std::min(im_min, a);
      im_max = std::max(im_max, a);
    }
  };
  double c_re_min, c_re_max, c_im_min, c_im_max;
  double s_re_min, s_re_max, s_im_min, s_im_max;
  scan(ctilde, c_re_min, c_re_max, c_im_min, c_im_max);
  scan(stilde, s_re_min, s_re_max, s_im_min, s_im_max);

  ShiftSelection sel;
  sel.theta_max = std::max(c_re_max, s_re_max);
  sel.eta_min = std::min(c_im_min, s_im_min);
  sel.eta_max = std::max(c_im_max, s_im_max);

  const double scale = std::max({1.0, std::abs(sel.theta_max), sel.eta_max});
  const double snap = 1e-10 * scale;
  if (c_re_min < 0.0 && c_re_min >= -snap) c_re_min = 0.0;
  if (s_re_min < 0.0 && s_re_min >= -snap) s_re_min = 0.0;
  sel.theta_min = std::min(c_re_min, s_re_min);

  const bool qualified =
      c_re_min >= 0.0 && s_re_min >= 0.0 && (c_re_min > 0.0 || s_re_min > 0.0);

  if (sel.theta_min < 0.0) {
    sel.gamma_star = 1.0;
    sel.sigma_star = 1.0;
    sel.definiteness = ShiftSelection::Definiteness::fallback;
  } else {
    sel.eta_tilde = std::sqrt(sel.theta_min * (sel.theta_max - sel.theta_min) / 2.0);
    if (sel.eta_max < sel.eta_tilde) {
      const double root = std::sqrt(sel.theta_min * sel.theta_max - sel.eta_max * sel.eta_max);
      sel.gamma_star = root;
      sel.sigma_star =
          (sel.theta_min + sel.theta_max - 2.0 * root) / (sel.theta_min + sel.theta_max + 2.0 * root);
    } else {
      sel.gamma_star = std::sqrt(sel.theta_min * sel.theta_min + sel.eta_max * sel.eta_max);
      sel.sigma_star = sel.gamma_star + sel.theta_min > 0.0
                           ? (sel.gamma_star - sel.theta_min) / (sel.gamma_star + sel.theta_min)
                           : 1.0;
    }
    if (!(sel.gamma_star > 0.0) || !std::isfinite(sel.gamma_star)) {
      sel.gamma_star = 1.0;
      sel.sigma_star = 1.0;
      sel.definiteness = ShiftSelection::Definiteness::fallback;
    } else {
      sel.definiteness = qualified ? ShiftSelection::Definiteness::qualified
                                   : ShiftSelection::Definiteness::fallback;
    }
  }
  sel.alpha = sel.gamma_star / 2.0;
  sel.beta = sel.alpha;
  return sel;
}

inline ShiftSelection select_shifts(const SpectralSplit& a, const SpectralSplit& b) {
  auto [ct, st] = kron_spectra(a, b);
  return select_shifts(ct, st);
}

// sigma_gamma = max_{lam} |(g-lam)/(g+lam)| * max_{sig} |(g-sig)/(g+sig)|:
// the two-factor bound on the spectral radius of the sweep's iteration matrix
// (exact norm identity because both operators are normal).
inline double contraction_bound(const ComplexVector& ctilde, const ComplexVector& stilde,
                                double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("contraction_bound: gamma must be positive");
  auto factor = [gamma](const ComplexVector& spectrum) {
    double worst = 0.0;
    for (Index i = 0; i < spectrum.size(); ++i) {
      const Complex lam = spectrum[i];
      const Complex den = gamma + lam;
      if (std::abs(den) < detail::solvability_floor(gamma, std::abs(lam)))
        throw BreakdownError("contraction_bound: gamma + eigenvalue vanishes");
      worst = std::max(worst, std::abs((gamma - lam) / den));
    }
    return worst;
  };
  return factor(ctilde) * factor(stilde);
}

// Precomputed state for one (A, B, alpha, beta) solve: both spectral splits
// plus the entrywise denominators of the two half-steps.  Construction fails
// with BreakdownError if any denominator sits below the solvability floor,
// so the half-steps themselves can divide unconditionally.
struct CSCSContext {
  SpectralSplit a;
  SpectralSplit b;
  double alpha;
  double beta;
  DenseMatrix denom_circ;  // (alpha + lam_a[i]) + (beta + lam_b[j])
  DenseMatrix denom_skew;  // (alpha + sig_a[i]) + (beta + sig_b[j])

  CSCSContext(SpectralSplit a_, SpectralSplit b_, double alpha_, double beta_)
      : a(std::move(a_)), b(std::move(b_)), alpha(alpha_), beta(beta_) {
    if (!(alpha > 0.0) || !(beta > 0.0))
      throw std::invalid_argument("CSCSContext: shifts must be positive");
    denom_circ = build(a.circulant_eigs, b.circulant_eigs, "circulant");
    denom_skew = build(a.skew_eigs, b.skew_eigs, "skew-circulant");
  }

 private:
  DenseMatrix build(const ComplexVector& ea, const ComplexVector& eb, const char* which) const {
    DenseMatrix d(ea.size(), eb.size());
    for (Index j = 0; j < eb.size(); ++j) {
      const Complex right = beta + eb[j];
      for (Index i = 0; i < ea.size(); ++i) {
        const Complex left = alpha + ea[i];
        const Complex den = left + right;
        if (std::abs(den) < detail::solvability_floor(std::abs(left), std::abs(right)))
          throw BreakdownError(std::string("CSCS ") + which +
                               " half-step denominator below solvability floor");
        d(i, j) = den;
      }
    }
    return d;
  }
};

// R = C - A*X - X*B evaluated through the eigendecompositions of the four
// splitting factors; O(nm log nm), no dense A or B ever formed.
inline DenseMatrix residual(const DenseMatrix& x, const DenseMatrix& c, const CSCSContext& ctx) {
  const Index n = ctx.a.order(), m = ctx.b.order();
  if (x.rows() != n || x.cols() != m || c.rows() != n || c.cols() != m)
    throw std::invalid_argument("residual: dimension mismatch");

  DenseMatrix r = c;

  {  // circulant part of A:  F^* diag(lam_a) F X
    DenseMatrix y = dft_columns(x, ctx.a.forward);
    y = ctx.a.circulant_eigs.asDiagonal() * y;
    r -= idft_columns(std::move(y), ctx.a.inverse);
  }
  {  // skew part of A:  D^* F^* diag(sig_a) F D X
    DenseMatrix y = ctx.a.modulation.values.asDiagonal() * x;
    y = dft_columns(std::move(y), ctx.a.forward);
    y = ctx.a.skew_eigs.asDiagonal() * y;
    y = idft_columns(std::move(y), ctx.a.inverse);
    r -= ctx.a.modulation.values.conjugate().asDiagonal() * y;
  }
  {  // circulant part of B:  X F^* diag(lam_b) F
    DenseMatrix y = idft_rows(x, ctx.b.inverse);
    y = y * ctx.b.circulant_eigs.asDiagonal();
    r -= dft_rows(y, ctx.b.forward);
  }
  {  // skew part of B:  X D^* F^* diag(sig_b) F D
    DenseMatrix y = x * ctx.b.modulation.values.conjugate().asDiagonal();
    y = idft_rows(y, ctx.b.inverse);
    y = y * ctx.b.skew_eigs.asDiagonal();
    y = dft_rows(y, ctx.b.forward);
    r -= y * ctx.b.modulation.values.asDiagonal();
  }
  return r;
}

// Solves (alpha I + C_A) Z + Z (beta I + C_B) = R: transform into the
// circulant eigenbases, divide entrywise, transform back.
inline DenseMatrix half_step_circulant(const DenseMatrix& r, const CSCSContext& ctx) {
  if (r.rows() != ctx.a.order() || r.cols() != ctx.b.order())
    throw std::invalid_argument("half_step_circulant: dimension mismatch");
  DenseMatrix g = dft_columns(r, ctx.a.forward);
  g = idft_rows(g, ctx.b.inverse);
  g = g.cwiseQuotient(ctx.denom_circ);
  g = idft_columns(std::move(g), ctx.a.inverse);
  return dft_rows(g, ctx.b.forward);
}

// Solves (alpha I + S_A) Z + Z (beta I + S_B) = R in the skew-circulant
// eigenbases (modulation, circulant conjugation, divide, undo).
inline DenseMatrix half_step_skew(const DenseMatrix& r, const CSCSContext& ctx) {
  if (r.rows() != ctx.a.order() || r.cols() != ctx.b.order())
    throw std::invalid_argument("half_step_skew: dimension mismatch");
  DenseMatrix g = ctx.a.modulation.values.asDiagonal() * r *
                  ctx.b.modulation.values.conjugate().asDiagonal();
  g = dft_columns(std::move(g), ctx.a.forward);
  g = idft_rows(g, ctx.b.inverse);
  g = g.cwiseQuotient(ctx.denom_skew);
  g = idft_columns(std::move(g), ctx.a.inverse);
  g = dft_rows(g, ctx.b.forward);
  return ctx.a.modulation.values.conjugate().asDiagonal() * g *
         ctx.b.modulation.values.asDiagonal();
}

struct SolveOptions {
  std::optional<double> alpha;  // both given or both defaulted from select_shifts
  std::optional<double> beta;
  double tol = 1e-6;
  int max_iterations = 5000;
  double shift_multiplier = 1.0;  // scales the auto-selected gamma_star
  bool skew_first = false;        // run the skew half-step before the circulant one
  std::optional<DenseMatrix> initial;
};

enum class SolveStatus { converged, max_iterations, breakdown };

struct SolveReport {
  DenseMatrix x;
  int iterations = 0;
  // entry 0 is the initial relative residual, entry k the value after sweep k
  std::vector<double> residual_history;
  double elapsed_seconds = 0.0;
  SolveStatus status = SolveStatus::max_iterations;
  double alpha = 0.0;  // shifts actually used (reportable when auto-selected)
  double beta = 0.0;
};

// Full iteration: X0 = 0 unless given, stop when ||R||_F / ||C||_F <= tol.
// Breakdown (denominator below floor) propagates as BreakdownError; running
// out of iterations is a status, not an exception.
inline SolveReport cscs_solve(const ToeplitzSpec& a_spec, const ToeplitzSpec& b_spec,
                              const DenseMatrix& c, const SolveOptions& opts = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  if (c.rows() != a_spec.n || c.cols() != b_spec.n)
    throw std::invalid_argument("cscs_solve: C must be A.n x B.n");
  if (opts.alpha.has_value() != opts.beta.has_value())
    throw std::invalid_argument("cscs_solve: give both shifts or neither");
  if (!(opts.tol > 0.0) || opts.max_iterations < 1)
    throw std::invalid_argument("cscs_solve: bad tolerance or iteration cap");
  if (!(opts.shift_multiplier > 0.0))
    throw std::invalid_argument("cscs_solve: shift multiplier must be positive");

  SpectralSplit sa(a_spec), sb(b_spec);
  double alpha, beta;
  if (opts.alpha) {
    alpha = *opts.alpha;
    beta = *opts.beta;
    if (!(alpha > 0.0) || !(beta > 0.0))
      throw std::invalid_argument("cscs_solve: shifts must be positive");
  } else {
    const ShiftSelection sel = select_shifts(sa, sb);
    alpha = beta = 0.5 * sel.gamma_star * opts.shift_multiplier;
  }

  const bool real_inputs = detail::is_real(a_spec) && detail::is_real(b_spec) &&
                           detail::is_real(c) && (!opts.initial || detail::is_real(*opts.initial));

  CSCSContext ctx(std::move(sa), std::move(sb), alpha, beta);

  DenseMatrix x;
  if (opts.initial) {
    if (opts.initial->rows() != c.rows() || opts.initial->cols() != c.cols())
      throw std::invalid_argument("cscs_solve: initial guess has wrong shape");
    x = *opts.initial;
  } else {
    x = DenseMatrix::Zero(c.rows(), c.cols());
  }

  const double cnorm = c.norm();
  const double denom = cnorm > 0.0 ? cnorm : 1.0;

  SolveReport rep;
  rep.alpha = alpha;
  rep.beta = beta;

  DenseMatrix r = residual(x, c, ctx);
  double rel = r.norm() / denom;
  rep.residual_history.push_back(rel);

  if (rel <= opts.tol) {
    rep.status = SolveStatus::converged;
  } else {
    for (int k = 1; k <= opts.max_iterations; ++k) {
      if (opts.skew_first) {
        x += half_step_skew(r, ctx);
        r = residual(x, c, ctx);
        x += half_step_circulant(r, ctx);
      } else {
        x += half_step_circulant(r, ctx);
        r = residual(x, c, ctx);
        x += half_step_skew(r, ctx);
      }
      r = residual(x, c, ctx);
      rel = r.norm() / denom;
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

// Dense sweep operator (gI+S~)^{-1} (gI-C~) (gI+C~)^{-1} (gI-S~) on the
// Kronecker-sum operators of the two splits.  Test-scale oracle: builds
// (nm)^2 dense matrices, intended for nm of a few hundred.
inline DenseMatrix iteration_matrix_dense(const ToeplitzSpec& a_spec, const ToeplitzSpec& b_spec,
                                          double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("iteration_matrix_dense: gamma must be positive");
  const auto [ca, sa] = cscs_split(a_spec);
  const auto [cb, sb] = cscs_split(b_spec);
  const Index n = a_spec.n, m = b_spec.n;
  const DenseMatrix in = DenseMatrix::Identity(n, n);
  const DenseMatrix im = DenseMatrix::Identity(m, m);
  const DenseMatrix ct =
      detail::kron(im, to_dense(ca)) + detail::kron(to_dense(cb).transpose(), in);
  const DenseMatrix st =
      detail::kron(im, to_dense(sa)) + detail::kron(to_dense(sb).transpose(), in);
  const DenseMatrix eye = DenseMatrix::Identity(n * m, n * m);

  Eigen::FullPivLU<DenseMatrix> lu_c(gamma * eye + ct);
  Eigen::FullPivLU<DenseMatrix> lu_s(gamma * eye + st);
  if (!lu_c.isInvertible() || !lu_s.isInvertible())
    throw BreakdownError("iteration_matrix_dense: shifted operator is singular");
  return lu_s.solve((gamma * eye - ct) * lu_c.solve(gamma * eye - st));
}

}  // namespace cscs
