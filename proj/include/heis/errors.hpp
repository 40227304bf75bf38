#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace heis {

struct DivisionByZero : std::domain_error {
  using std::domain_error::domain_error;
};

/// Evaluation or substitution landed on (or too close to) a denominator zero.
struct PoleError : std::domain_error {
  using std::domain_error::domain_error;
};

struct UnknownVariable : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ParseError : std::invalid_argument {
  ParseError(const std::string& what, std::size_t pos)
      : std::invalid_argument(what + " at offset " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

}  // namespace heis
