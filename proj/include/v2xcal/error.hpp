#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace v2xcal {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter or argument outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed input document. Row numbers are 1-based and count the header
// row, so they match what a text editor shows. Row 0 means document-level.
class ParseError : public Error {
 public:
  ParseError(std::size_t row, std::string field, const std::string& message)
      : Error(row == 0 ? message
                       : "row " + std::to_string(row) +
                             (field.empty() ? "" : ", field '" + field + "'") +
                             ": " + message),
        row_(row),
        field_(std::move(field)) {}

  std::size_t row() const noexcept { return row_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t row_;
  std::string field_;
};

// Invalid configuration key or value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace v2xcal
