#pragma once

#include <stdexcept>
#include <string>

namespace automato {

/// A parameter lies outside the domain an operation accepts.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Density estimation broke down, e.g. a point whose k nearest neighbours all
/// coincide with it.
class DegenerateDensity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or model.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace automato
