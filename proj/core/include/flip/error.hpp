#pragma once

#include <stdexcept>
#include <string>

namespace flip {

// Bad input: malformed values, violated preconditions, schema problems.
// The CLI maps these to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical or resource failure while running a valid request
// (integrator fault, enumeration guard). The CLI maps these to exit code 2.
class RuntimeFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedOrder : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class GuardExceeded : public RuntimeFault {
 public:
  using RuntimeFault::RuntimeFault;
};

class IntegrationFault : public RuntimeFault {
 public:
  using RuntimeFault::RuntimeFault;
};

}  // namespace flip
