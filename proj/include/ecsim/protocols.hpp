#pragma once

// Entanglement concentration for 4-mode cluster-type entangled coherent
// states.
//
// Two pipelines are provided. ecp1 concentrates beta/gamma-weighted input
// with a single-mode ancilla: one beam splitter and vacuum post-selection,
// then an amplitude-halving splitter and sign-blind detection. ecp2 handles
// four independent weights with a two-mode and a single-mode ancilla, three
// splitters, a triple vacuum post-selection, a mode swap, then three
// amplitude-halving splitters and detections.
//
// Every stage is simulated exactly on the coherent-state engine; the
// closed-form normalization constants and success probabilities are
// provided alongside so the two routes can be compared.

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ecsim/coherent.hpp"

namespace ecsim {

struct Ecp1Params {
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 0.0;

  /// alpha finite and > 0, coefficients finite, not both zero.
  void validate() const;
};

struct Ecp2Params {
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  double eta = 0.0;

  void validate() const;
};

struct ThetaParams {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;
};

struct Coefficients4 {
  double beta;
  double gamma;
  double delta;
  double eta;
};

/// Hyperspherical coordinates on the unit 3-sphere:
/// beta = cos t3, gamma = sin t3 cos t2, delta = sin t3 sin t2 cos t1,
/// eta = sin t3 sin t2 sin t1.
Coefficients4 theta_to_coefficients(const ThetaParams& t);
Ecp2Params ecp2_from_theta(double alpha, const ThetaParams& t);

enum class Scaling { normalized, raw };

using Labels4 = std::array<std::string, 4>;
inline const Labels4 kClusterModes{"a", "b", "c", "d"};

/// Amplitude/sign pattern of the maximally entangled cluster-type state,
/// 1/2 (|++++> + |--++> + |++--> - |---->) in units of alpha, on `modes`.
CoherentSuperposition cluster_pattern(double alpha, const Labels4& modes);
CoherentSuperposition build_target_mes(double alpha);

// Closed-form normalization constants. Each throws DegenerateStateError when
// the radicand is not strictly positive.
double n1(const Ecp1Params& p);
double n2(const Ecp1Params& p);
double n3(const Ecp2Params& q);
double n4(const Ecp2Params& q);
double n5(const Ecp2Params& q);

/// N1 [beta(|++++> + |--++>) + gamma(|++--> - |---->)].
CoherentSuperposition build_partial_ecp1(const Ecp1Params& p, const Labels4& modes = kClusterModes,
                                         Scaling scaling = Scaling::normalized);
/// N2 [beta |alpha> + gamma |-alpha>].
CoherentSuperposition build_ancilla_single(const Ecp1Params& p, const std::string& mode = "e",
                                           Scaling scaling = Scaling::normalized);
/// N3 [beta|++++> + gamma|--++> + delta|++--> - eta|---->].
CoherentSuperposition build_partial_ecp2(const Ecp2Params& q, const Labels4& modes = kClusterModes,
                                         Scaling scaling = Scaling::normalized);
/// N4 [beta|++> + gamma|+-> + delta|-+> + eta|-->].
CoherentSuperposition build_ancilla_two_mode(const Ecp2Params& q,
                                             const std::array<std::string, 2>& modes = {"e", "f"},
                                             Scaling scaling = Scaling::normalized);
/// N5 [beta gamma |alpha> + delta eta |-alpha>].
CoherentSuperposition build_ancilla_g(const Ecp2Params& q, const std::string& mode = "g",
                                      Scaling scaling = Scaling::normalized);

/// 4 |N1 N2 beta gamma|^2.
double formula_p_ecp1(const Ecp1Params& p);
/// 4 |N3 N4 N5 beta gamma delta eta|^2; exactly 0 when the coefficient product
/// vanishes (its limit), even where N5 itself is undefined.
double formula_p_ecp2(const Ecp2Params& q);

struct StageRecord {
  std::string name;
  CoherentSuperposition state;
  double norm_squared = 0.0;

  std::size_t term_count() const noexcept { return state.term_count(); }
  const std::vector<std::string>& modes() const noexcept { return state.labels(); }
};

struct ProtocolReport {
  std::string protocol;
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<StageRecord> stages;
  double p_exact = 0.0;
  double p_formula = 0.0;
  /// 0 when the post-selected branch is empty.
  double final_fidelity = 0.0;
  CoherentSuperposition final_state;

  const StageRecord& stage(std::string_view name) const;
  std::vector<std::size_t> term_counts() const;
};

// Stage names, in pipeline order.
namespace stage {
inline constexpr const char* kCombined = "combined";
inline constexpr const char* kMixed = "mixed";
inline constexpr const char* kSelected = "selected";
inline constexpr const char* kSwapped = "swapped";
inline constexpr const char* kSplit = "split";
inline constexpr const char* kDetected = "detected";
}  // namespace stage

ProtocolReport run_ecp1(const Ecp1Params& p, const ToleranceConfig& tol = {});
ProtocolReport run_ecp2(const Ecp2Params& q, const ToleranceConfig& tol = {});

/// JSON document for a report; schema in docs/report-schema.md.
std::string report_to_json(const ProtocolReport& report, int indent = 2);

/// Human-readable multi-line summary.
std::string report_to_text(const ProtocolReport& report);

}  // namespace ecsim
