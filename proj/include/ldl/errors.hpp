#ifndef LDL_ERRORS_HPP_
#define LDL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ldl {

// Invalid experiment or distribution parameters. Maps to CLI exit code 2.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input outside an operation's documented domain.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// A state, memory or cardinality budget was exceeded. Maps to exit code 3.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The operation is undefined for the given lamp group (e.g. path reversal
// over a lamp group with elements of order > 2).
struct UnsupportedOperation : std::logic_error {
  using std::logic_error::logic_error;
};

// Elements of different wreath products were combined.
struct GroupMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace ldl

#endif  // LDL_ERRORS_HPP_
