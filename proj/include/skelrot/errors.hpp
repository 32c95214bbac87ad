#pragma once

#include <stdexcept>
#include <string>

namespace skelrot {

// Bad arguments or parameters outside the supported range.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A quantity would rely on an index outside the certified range of the
// rational stand-in for rho.
class CertificationError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Evaluation reached a gap that the finite model does not track.
class WindowError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Two independent computations disagree.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace skelrot
