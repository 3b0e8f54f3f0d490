#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zslab {

// Bad arguments or violated preconditions.
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public UsageError {
public:
  ParseError(const std::string& what, std::size_t position)
      : UsageError(what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

// A computation refused to run because it would exceed its enumeration budget.
class BudgetExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Symbolic reduction hit a digit case it does not handle.
class UnsupportedCase : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

}  // namespace zslab
