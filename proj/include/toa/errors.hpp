#pragma once

#include <stdexcept>
#include <string>

namespace toa {

/// Rejected input: a precondition or type invariant does not hold.
class validation_error : public std::invalid_argument {
 public:
  explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation failed to meet its numerical contract (non-convergence,
/// edge leakage during propagation, norm deficit on a too-coarse lattice).
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace toa
