#pragma once

// Self-check suite: closed-form constants and probabilities against the
// exact engine, fidelity of the concentrated states, and engine invariants.

#include <cstdint>
#include <string>
#include <vector>

namespace ecsim {

enum class InjectedFault {
  none,
  n3_sign_flip,  // flips the sign of the exp(-8|alpha|^2) term in N3
};

struct ValidationOptions {
  std::uint64_t seed = 42;
  int draws = 100;
  InjectedFault fault = InjectedFault::none;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

std::vector<CheckResult> run_validation(const ValidationOptions& options = {});

}  // namespace ecsim
