#pragma once

#include <stdexcept>
#include <string>

namespace wfarey {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed unit document, rational literal, or option value.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of an operation (s outside [0,1], etc.).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Adjacent unit pieces disagree at their shared endpoint.
class ContinuityError : public Error {
 public:
  using Error::Error;
};

/// A unit piece has a root (or a nonpositive value) on its domain.
class PositivityError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature exhausted its subdivision budget.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double estimate, double error_bound)
      : Error(what), estimate_(estimate), error_bound_(error_bound) {}
  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

/// Brute-force enumeration would exceed the configured denominator cap.
class EnumerationCapError : public Error {
 public:
  using Error::Error;
};

/// The next-term recurrence found no admissible successor. Signals that
/// the order is below the unimodularity threshold.
class RecurrenceBreakdown : public Error {
 public:
  using Error::Error;
};

/// A consecutive pair that was required to be unimodular is not.
class NotUnimodularError : public Error {
 public:
  using Error::Error;
};

}  // namespace wfarey
