#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace levimax {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text; carries the 0-based character offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// log/sqrt of a non-positive argument, division by zero, and similar.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A linear system that must be solved is singular at the requested point.
class SingularError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure did not meet its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_increment)
      : Error(what), last_increment_(last_increment) {}
  double last_increment() const noexcept { return last_increment_; }

 private:
  double last_increment_;
};

/// Invalid scenario or command-line configuration; the message names the field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace levimax
