#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace steerkit {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value is outside the mathematical domain of an operation
/// (non-finite entries, transmittance outside [0,1], negative squeezing, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The steering block of a Schur complement is numerically singular.
/// Carries the offending minimum eigenvalue for diagnostics.
class SingularBlockError : public DomainError {
 public:
  SingularBlockError(const std::string& what, double min_eigenvalue)
      : DomainError(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// Party sizes or mode counts violate the requirements of an operation
/// (e.g. a monogamy relation that only holds for single-mode parties).
class ArityError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input: partition strings, quadrature combinations,
/// JSON documents, CSV rows, relation specifiers.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An internal numerical consistency check failed (e.g. the spectrum of
/// Omega*sigma did not split into +/- pairs within tolerance).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A threshold search found more than one sign change on its scan grid.
/// Carries every bracketing interval so the caller can inspect the shape.
class MultiCrossingError : public NumericalError {
 public:
  MultiCrossingError(const std::string& what,
                     std::vector<std::pair<double, double>> intervals)
      : NumericalError(what), intervals_(std::move(intervals)) {}
  const std::vector<std::pair<double, double>>& intervals() const {
    return intervals_;
  }

 private:
  std::vector<std::pair<double, double>> intervals_;
};

/// A tomographic record set is missing a combination required by the plan.
class IncompletePlanError : public Error {
 public:
  IncompletePlanError(const std::string& what, std::string missing_combo)
      : Error(what), missing_combo_(std::move(missing_combo)) {}
  const std::string& missing_combo() const { return missing_combo_; }

 private:
  std::string missing_combo_;
};

}  // namespace steerkit
