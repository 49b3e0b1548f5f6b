#pragma once

#include <stdexcept>
#include <string>

namespace newtoncurv {

/// Base class of every exception thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: index out of range, mismatched sizes, non-finite data.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Curvature order with the wrong parity or outside the defined range.
class UnsupportedOrderError : public Error {
 public:
  using Error::Error;
};

/// Evaluation point outside the chart domain.
class ChartDomainError : public Error {
 public:
  using Error::Error;
};

/// Spanning fields of the normal distribution are rank deficient at a point.
class DegenerateDistributionError : public Error {
 public:
  using Error::Error;
};

/// A required geometric hypothesis fails its numerical gate.
class HypothesisViolationError : public Error {
 public:
  using Error::Error;
};

/// Unknown name (geometry, suite, ...).
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Quadrature failure: non-finite sample or empty grid.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

}  // namespace newtoncurv
