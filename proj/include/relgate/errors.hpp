#pragma once

#include <stdexcept>
#include <string>

namespace relgate {

// Malformed external input: pool files, trajectory records, candidate banks.
// The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A violated internal invariant. Indicates a bug rather than bad input; the
// CLI maps this (and any other std::logic_error) to exit code 3.
class InvariantError : public std::logic_error {
 public:
  explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace relgate
