#pragma once

#include <stdexcept>
#include <string>

namespace mallnav {

enum class ErrorKind {
  invalid_argument,  // precondition violated by the caller
  degenerate_input,  // geometry too degenerate to solve
  out_of_bounds,
  parse,             // malformed file or document
  io,
  no_route,
};

/// Single exception type thrown by every module; `kind()` drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mallnav
