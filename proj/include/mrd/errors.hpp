#pragma once

#include <stdexcept>
#include <string>

namespace mrd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape or subsystem bookkeeping is inconsistent (dimension mismatch,
/// missing bipartition, bad subsystem index).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A value lies outside the domain of the requested operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative routine hit its cap without meeting its tolerance.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// A configured resource limit (e.g. total dimension) would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// An object failed its validation (e.g. POVM completeness).
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace mrd
