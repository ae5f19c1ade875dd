#pragma once

#include <stdexcept>
#include <string>

namespace ecsim {

/// Mode-register mismatch: unknown label, duplicate label, or differing mode counts.
class ShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state (or closed-form radicand) with zero norm where a nonzero one is required.
class DegenerateStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dropping a mode would not be a pure-state map: the mode is not a function
/// of the retained amplitude pattern.
class DecoherenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ecsim
