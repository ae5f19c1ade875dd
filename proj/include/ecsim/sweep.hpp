#pragma once

// Parameter sweeps of the success probability (closed form next to the
// exact pipeline value) and their CSV encoding.

#include <cstddef>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

namespace ecsim {

enum class GammaConvention {
  derived,   // gamma = sqrt(1 - beta^2)
  explicit_  // gamma fixed to SweepSpec::gamma
};

struct SweepSpec {
  std::vector<double> alpha_values;
  std::size_t grid_steps = 201;
  double theta3 = std::numbers::pi / 6.0;  // ecp2 only
  GammaConvention gamma_convention = GammaConvention::derived;
  double gamma = 0.0;    // ecp1, explicit convention only
  unsigned jobs = 1;     // worker threads; output order does not depend on it

  /// Throws std::invalid_argument on an empty/non-positive alpha list,
  /// grid_steps < 2 or jobs == 0.
  void validate() const;
};

/// alpha in {0.5, 1, 2}, 201 steps.
SweepSpec default_ecp1_sweep();
/// alpha = 2, theta3 = pi/6, 101 x 101 grid over [0, pi/2]^2.
SweepSpec default_ecp2_sweep();

struct Ecp1Row {
  double alpha, beta, gamma, p_formula, p_exact;
};

struct Ecp2Row {
  double alpha, theta1, theta2, theta3, beta, gamma, delta, eta, p_formula, p_exact;
};

/// alpha outer, beta ascending over [0, 1] inner.
std::vector<Ecp1Row> sweep_ecp1(const SweepSpec& spec);
/// alpha outer, theta1 ascending, theta2 ascending innermost; both over [0, pi/2].
std::vector<Ecp2Row> sweep_ecp2(const SweepSpec& spec);

/// Writes header + rows, every number with 17 significant digits.
void write_ecp1_csv(std::ostream& out, const std::vector<Ecp1Row>& rows);
void write_ecp2_csv(std::ostream& out, const std::vector<Ecp2Row>& rows);

/// Formats a double with 17 significant digits ("%.17g").
std::string csv_number(double v);

}  // namespace ecsim
