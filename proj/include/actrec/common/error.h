#pragma once

#include <stdexcept>
#include <string>

namespace actrec {

// Bad input: malformed files, inconsistent shapes, out-of-range parameters.
// The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Failure while running an otherwise valid request (I/O, numerical blow-up).
// The CLI maps this to exit code 2.
class RuntimeError : public std::runtime_error {
 public:
  explicit RuntimeError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace actrec
