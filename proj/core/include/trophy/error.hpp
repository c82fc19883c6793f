#pragma once

#include <stdexcept>
#include <string>

namespace trophy {

/// Raised when a parameter or precision specification is out of its domain.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised on caller mistakes: dimension mismatches, unknown names, mismatched levels.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace trophy
