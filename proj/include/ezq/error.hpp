#pragma once

#include <stdexcept>
#include <string>

namespace ezq {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Input data carries no information (all zeros, constant, ...).
class DegenerateSourceError : public Error {
 public:
  using Error::Error;
};

// Query outside the range covered by a curve or table.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Malformed serialized data or text input.
class ParseError : public Error {
 public:
  using Error::Error;
};

// An iterative solver stopped without meeting its tolerance.
class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace ezq
