#pragma once

#include <stdexcept>
#include <string>

namespace qcbnorm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes or subsystem layouts do not fit together.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A value violates the invariant of the type it is being turned into
/// (non-Hermitian operator, negative density eigenvalue, ...).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// A scalar parameter is outside its admissible range.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// A Renyi order was passed to an operation defined for another regime.
class RegimeError : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

/// Negative or zero power requested of a singular operator.
class SingularPowerError : public Error {
 public:
  using Error::Error;
};

/// Relative entropy variance requested outside supp(rho) <= supp(sigma).
class UndefinedVarianceError : public Error {
 public:
  using Error::Error;
};

/// Every optimizer restart ended on the +infinity barrier.
class InfeasibleObjective : public Error {
 public:
  using Error::Error;
};

/// A map does not meet the contract of the operation (e.g. not trace preserving).
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace qcbnorm
