// Error types thrown across the risopt library. Plain std::invalid_argument is
// used for caller mistakes (dimension mismatches, empty alphabets).
#pragma once

#include <stdexcept>
#include <string>

namespace risopt {

// Invalid configuration input: bad file, missing field, value out of range.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed problem file; the message carries the path and line number.
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested search space exceeds a hard guard.
class capacity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failure that indicates an upstream bug (non-PSD matrix where one
// is guaranteed, non-positive MSE, failed factorization after regularization).
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace risopt
