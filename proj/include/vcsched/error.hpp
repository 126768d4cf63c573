#pragma once

#include <stdexcept>

namespace vcsched {

/// Raised for malformed input: unknown ids, broken invariants, bad files.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace vcsched
