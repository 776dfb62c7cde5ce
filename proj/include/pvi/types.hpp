#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace pvi {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the arguments was violated (bad index, bad size, eps = 0, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A denominator that genericity is supposed to keep away from zero vanished.
class ResonanceError : public Error {
 public:
  using Error::Error;
};

/// Evaluation point outside the domain of a series, chart or vector field.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative process ran out of budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace pvi
