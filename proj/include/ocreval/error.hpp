// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ocreval {

/// Base class for all errors raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates a contract: bad encoding, duplicate ids, missing fields.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Malformed structured input with a known position (1-based; 0 = unknown).
class ParseError : public DataError {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column,
             const std::string& what)
      : DataError(source + ":" + std::to_string(line) +
                  (column ? ":" + std::to_string(column) : std::string{}) +
                  ": " + what),
        source_(source),
        line_(line),
        column_(column) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::string source_;
  std::size_t line_;
  std::size_t column_;
};

/// A metric is undefined for the given input (no reference characters/tokens).
class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

}  // namespace ocreval
