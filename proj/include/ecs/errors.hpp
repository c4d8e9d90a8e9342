#pragma once

#include <stdexcept>
#include <string>

namespace ecs {

// Invalid caller input. Maps to CLI exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical diagnostic tripped (non-finite value, normalization drift,
// truncation budget exceeded). Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ecs
