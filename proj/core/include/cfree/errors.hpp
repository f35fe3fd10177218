#pragma once

#include <stdexcept>
#include <string>

namespace cfree {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed tableau or mismatched dimensions.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Input outside the domain of an operation (complex roots, non-skew input, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A parameter choice that makes a denominator or linear system singular.
class SingularParameterError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Non-finite state, root-finder failure and similar numerical breakdowns.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The shape of a tableau is not supported by the requested check.
class UnsupportedShapeError : public Error {
 public:
  using Error::Error;
};

/// Unreadable or invalid input file.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace cfree
