#pragma once

#include <stdexcept>
#include <string>

namespace xsect {

/// Raised when an operation's precondition or a domain invariant is violated.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace xsect
