#pragma once

#include <stdexcept>
#include <string>

namespace pathrelax {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A state left the admissible set of its model (nonpositive height, area, ...).
class NonAdmissibleState : public Error {
public:
  using Error::Error;
};

// A parameter violates its documented precondition.
class InvalidParam : public Error {
public:
  using Error::Error;
};

// A requested time increment exceeds the stability bound of the scheme.
class CflViolation : public Error {
public:
  using Error::Error;
};

// Two grid solutions cannot be compared cell by cell.
class GridMismatch : public Error {
public:
  using Error::Error;
};

// File or stream I/O failed.
class IoError : public Error {
public:
  using Error::Error;
};

// An iterative solver exhausted its iteration budget.
class NoConvergence : public Error {
public:
  NoConvergence(const std::string& what, int iterations, double residual_norm)
      : Error(what), iterations(iterations), residual_norm(residual_norm) {}

  int iterations;
  double residual_norm;
};

}  // namespace pathrelax
