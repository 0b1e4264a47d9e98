#pragma once

#include <stdexcept>
#include <string>

namespace kkt_sense {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A problem field has the wrong shape or inconsistent dimensions.
/// `field()` names the offending field ("Q0", "theta", ...).
class DimensionError : public Error {
 public:
  DimensionError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// A problem file failed to parse or violated the format contract.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A derivative oracle is missing, threw, or returned a malformed value.
/// The message names the failing oracle.
class OracleError : public Error {
 public:
  using Error::Error;
};

/// The KKT Jacobian D_z g is numerically singular; the implicit-function
/// Jacobian is not defined at this point.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// A sensitivity routine was called on a solution that did not converge.
class NotConvergedError : public Error {
 public:
  using Error::Error;
};

}  // namespace kkt_sense
