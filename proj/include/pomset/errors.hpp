#pragma once

#include <stdexcept>
#include <string>

namespace pomset {

// Malformed textual input (.ps, .prog, .rf).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Structurally invalid value: cyclic order, bad event index, bit outside {0,1}.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An operation was called outside its domain (e.g. 1 in Y for the fixed-point procedure).
class PreconditionViolated : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Enumeration would exceed the requested event bound.
class BoundExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Read-from map that is not total on loads or links accesses on different addresses.
class MalformedRf : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace pomset
