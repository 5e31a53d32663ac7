#pragma once

#include <stdexcept>
#include <string>

namespace qdcert {

// Malformed input: bad JSON, inconsistent dimensions, out-of-range parameters.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An enumeration would exceed its configured size cap.
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A checked mathematical invariant failed at runtime.
struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace qdcert
