#pragma once

#include <stdexcept>
#include <string>

namespace cwrmt {

// Root of every error raised by the library. The CLI maps subclasses to
// distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (|t| >= 1, beta <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A mixing density whose normalizer does not converge.
class IntegrabilityError : public Error {
 public:
  using Error::Error;
};

// Minimum of a potential that is neither quadratic nor quartic, or sits on the boundary.
class ClassificationError : public Error {
 public:
  using Error::Error;
};

// An enumeration or allocation guard was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class UnsupportedEnsembleError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cwrmt
