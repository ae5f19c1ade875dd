#pragma once

// Linear-optics primitives on CoherentSuperposition. All operations are
// pure and return a canonicalized state.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ecsim/coherent.hpp"

namespace ecsim {

struct SelectionOutcome {
  CoherentSuperposition state;  // kept branch, unnormalized, selected modes removed
  double probability = 0.0;     // relative to the normalized input
};

/// Balanced 50:50 beam splitter: (u, v) -> ((u+v)/sqrt2, (u-v)/sqrt2) on the
/// slots of `mode_i`, `mode_j`. Labels are kept.
CoherentSuperposition beam_splitter(const CoherentSuperposition& state, std::string_view mode_i,
                                    std::string_view mode_j, const ToleranceConfig& tol = {});

/// Beam splitter followed by renaming the output ports (d, e -> d1, e1).
/// An output label may repeat its own input label; otherwise it must be fresh.
CoherentSuperposition beam_splitter(const CoherentSuperposition& state, std::string_view mode_i,
                                    std::string_view mode_j, std::string out_i, std::string out_j,
                                    const ToleranceConfig& tol = {});

/// Splits `mode` against a vacuum port: u -> (u/sqrt2, u/sqrt2). The slot of
/// `mode` is replaced in place by `new_label_1` followed by `new_label_2`.
CoherentSuperposition beam_splitter_with_vacuum(const CoherentSuperposition& state, std::string_view mode,
                                                std::string new_label_1, std::string new_label_2,
                                                const ToleranceConfig& tol = {});

/// Exchanges the register positions of two modes (labels travel with their
/// amplitudes). An involution.
CoherentSuperposition swap_modes(const CoherentSuperposition& state, std::string_view mode_i,
                                 std::string_view mode_j);

/// Idealized "no photon" post-selection: keeps the terms whose amplitude is
/// zero in every listed mode and removes those modes. Overlap between kept
/// and discarded branches is ignored. No survivors gives an empty branch with
/// probability 0.
SelectionOutcome select_vacuum_branch(const CoherentSuperposition& state,
                                      std::span<const std::string> modes,
                                      const ToleranceConfig& tol = {});

/// Physical projection of `mode` onto |0>: every coefficient picks up
/// <0|u> = exp(-|u|^2/2), then the mode is removed and terms re-merged.
SelectionOutcome project_vacuum(const CoherentSuperposition& state, std::string_view mode,
                                const ToleranceConfig& tol = {});

/// Detects `mode` without resolving the sign of its amplitude. Valid only if
/// that amplitude is a function of the retained pattern; otherwise throws
/// DecoherenceError.
CoherentSuperposition discard_correlated_mode(const CoherentSuperposition& state, std::string_view mode,
                                              const ToleranceConfig& tol = {});

/// Threshold below which an amplitude counts as vacuum for `state`:
/// amp_merge_tol * max(1, largest amplitude magnitude).
double vacuum_threshold(const CoherentSuperposition& state, const ToleranceConfig& tol);

}  // namespace ecsim
