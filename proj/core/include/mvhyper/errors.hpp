#pragma once

#include <stdexcept>
#include <string>

namespace mvhyper {

/// Thrown when an enumeration or scan would exceed its hard size guard.
class ResourceLimitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a closed-form path is asked for a design outside its validity
/// region (the enumeration paths remain available for such designs).
class UnsupportedDesignError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace mvhyper
