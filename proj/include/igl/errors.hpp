#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace igl {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed formula or file text. `column` is 1-based within the offending text.
struct ParseError : Error {
  ParseError(const std::string& message, std::size_t column)
      : Error(message), column(column) {}
  std::size_t column;
};

// Well-formed input that refers to something undeclared, unknown, or out of range.
struct InputError : Error {
  using Error::Error;
};

// A configured enumeration or evaluation budget was exceeded.
struct ResourceLimitError : Error {
  using Error::Error;
};

}  // namespace igl
