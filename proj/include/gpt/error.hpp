#pragma once

#include <stdexcept>
#include <string>

namespace gpt {

enum class ErrorKind {
  InvalidDimension,
  InvalidBasis,
  DimensionMismatch,
  NotAState,
  NotHermitian,
  NonMonotoneGrid,
  NotAntisymmetric,
  DegenerateVertices,
  CentroidNotAtOrigin,
  UnknownTheory,
  Unsupported,
  InvalidTime,
  InadmissibleDynamics,
  StateOutsideSpace,
  DisconnectedGraph,
  InconsistentCycle,
  NonpositivePeriod,
  NonFinite,
  Oversize,
  Parse,
};

const char* to_string(ErrorKind kind);

/// Every library failure surfaces as this exception; `kind()` lets callers
/// (the CLI in particular) map failures onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by density_from_bloch; carries the offending eigenvalue.
class NotAStateError : public Error {
 public:
  explicit NotAStateError(double min_eigenvalue);
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

}  // namespace gpt
