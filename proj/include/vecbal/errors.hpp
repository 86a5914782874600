#pragma once

#include <stdexcept>
#include <string>

namespace vecbal {

/// Bad arguments or an incompatible configuration. Maps to CLI exit code 2.
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Semantic config violation; `field()` names the offending key.
class ValidationError : public UsageError {
public:
  ValidationError(std::string field, const std::string& what)
      : UsageError(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// Malformed config text, with 1-based position.
class ParseError : public UsageError {
public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : UsageError("parse error at line " + std::to_string(line) + ", column " +
                   std::to_string(column) + ": " + what),
        line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_, column_;
};

/// An omega breakpoint table was queried beyond its last point.
class OmegaDomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A per-step invariant failed while debug assertions were enabled.
class InvariantViolation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace vecbal
