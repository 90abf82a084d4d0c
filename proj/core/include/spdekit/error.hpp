#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spdekit {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments or inconsistent dimensions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed input text; line numbers are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Factorisation breakdown, non-convergence and similar.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public NumericalError {
 public:
  explicit NotPositiveDefinite(std::ptrdiff_t index)
      : NumericalError("not positive definite (pivot " + std::to_string(index) + ")"),
        index_(index) {}
  std::ptrdiff_t index() const noexcept { return index_; }

 private:
  std::ptrdiff_t index_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace spdekit
