#pragma once

#include <stdexcept>
#include <string>

namespace epsmatch {

/// Raised when an argument violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by exact enumeration when n exceeds the configured limit.
class InstanceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a Monte Carlo estimate cannot be converted to log scale
/// (no successes were observed).
class DegenerateEstimate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace epsmatch
