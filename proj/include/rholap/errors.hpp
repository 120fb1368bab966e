#pragma once

#include <stdexcept>
#include <string>

namespace rholap {

/// Malformed or out-of-contract input (CLI exit code 2).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A size or node budget was exhausted before an exact answer was found.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rholap
