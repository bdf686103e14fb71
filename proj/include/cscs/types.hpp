#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Core>

namespace cscs {

using Complex = std::complex<double>;
using Index = Eigen::Index;

// Dense storage is complex throughout; real problems get their imaginary dust
// swept out once, at API exit, never mid-pipeline.
using DenseMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// A splitting denominator or triangular pivot too close to zero to divide by.
class BreakdownError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Spectra of the two coefficient matrices overlap: A and -B share an
// eigenvalue (up to the solvability floor), so the equation is singular.
class SingularEquationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cscs
