#pragma once

#include <stdexcept>
#include <string>

namespace sparsebell {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation was not met.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// A value is not representable at the requested dyadic precision.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// A requested average exceeds the Carleson bound.
class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

/// A point lies outside the domain [0, C] x R of a Bellman function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input (rationals, sequence files).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A configured memory/state cap would be exceeded.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

/// A key is not present in a table.
class LookupError : public Error {
 public:
  using Error::Error;
};

}  // namespace sparsebell
