#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uk {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input values: wrong dimensions, non-Hermitian operators, eigenstates
// where a residual direction is required.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotHermitian : public DomainError {
 public:
  using DomainError::DomainError;
};

class NonFinite : public DomainError {
 public:
  using DomainError::DomainError;
};

class ZeroVector : public DomainError {
 public:
  using DomainError::DomainError;
};

// The state has zero spread for the operator, so there is no residual
// direction to work with.
class EigenstateInput : public DomainError {
 public:
  using DomainError::DomainError;
};

// Malformed text or files.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& message, std::size_t position)
      : InputError(message + " at offset " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnknownName : public InputError {
 public:
  using InputError::InputError;
};

class IoError : public InputError {
 public:
  using InputError::InputError;
};

// A computed quantity broke an identity it must satisfy.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateChain : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IdentityViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace uk
