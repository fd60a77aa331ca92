#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace snmf {

struct Index {
  std::size_t row = 0;
  std::size_t col = 0;
};

std::string to_string(Index where);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not conform.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A value left the domain of an operation (negative base, 0/0, log of 0...).
/// Carries the offending entry when one exists.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what, std::optional<Index> where = std::nullopt);

  const std::optional<Index>& where() const noexcept { return where_; }

 private:
  std::optional<Index> where_;
};

/// Invalid or unsupported solver configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed matrix file. `line` is 1-based; 0 when the error is not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An inner iterative procedure failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace snmf
