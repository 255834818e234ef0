#pragma once

#include <stdexcept>
#include <string>

namespace oddlab {

// Invalid construction request: bad shapes, unrepresentable operators,
// malformed experiment configs. Maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A declared precondition of an operation was violated by the caller.
struct ContractError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The computation cannot be completed reliably: degeneracies, resolution
// limits, cross-check mismatches.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace oddlab
