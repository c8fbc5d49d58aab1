#pragma once

#include <stdexcept>
#include <string>

namespace stablecone {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: malformed files, invalid dyads, model/graph mismatches.
// The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A broken internal invariant. The CLI maps these to exit code 3.
class InternalError : public Error {
 public:
  using Error::Error;
};

class InvalidDyadError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidToggleSetError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class EmptyRadiusError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ModelMismatchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class AttributeTypeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class EmptyAlternativeSetError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class PreconditionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace stablecone
