#pragma once

#include <stdexcept>
#include <string>

namespace dvrtrace {

// Malformed documents, bad descriptors, violated preconditions on inputs.
class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The computation is outside what this library can certify (imperfect residue
// fields on the structure-table path, exhausted search bounds, degree caps).
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two routes that must agree did not. Always a bug in this library.
class InternalInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace dvrtrace
