#pragma once

#include <stdexcept>
#include <string>

namespace depbounds {

// Precondition or argument outside the documented domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The requested method cannot handle the given inputs (but another can).
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Internal cached state no longer matches the object it was built from.
class IntegrityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace depbounds
