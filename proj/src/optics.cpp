#include "ecsim/optics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "ecsim/errors.hpp"

namespace ecsim {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

void require_distinct(std::string_view a, std::string_view b, const char* op) {
  if (a == b) throw ShapeError(std::string(op) + ": modes must differ, got '" + std::string(a) + "' twice");
}

}  // namespace

double vacuum_threshold(const CoherentSuperposition& state, const ToleranceConfig& tol) {
  double scale = 1.0;
  for (const auto& t : state.terms()) {
    for (const auto& a : t.amplitudes) scale = std::max(scale, std::abs(a));
  }
  return tol.amp_merge_tol * scale;
}

CoherentSuperposition beam_splitter(const CoherentSuperposition& state, std::string_view mode_i,
                                    std::string_view mode_j, const ToleranceConfig& tol) {
  require_distinct(mode_i, mode_j, "beam_splitter");
  const std::size_t i = state.index_of(mode_i);
  const std::size_t j = state.index_of(mode_j);
  auto terms = state.terms();
  for (auto& t : terms) {
    const Complex u = t.amplitudes[i];
    const Complex v = t.amplitudes[j];
    t.amplitudes[i] = (u + v) * kInvSqrt2;
    t.amplitudes[j] = (u - v) * kInvSqrt2;
  }
  return canonicalize(CoherentSuperposition(state.labels(), std::move(terms)), tol);
}

CoherentSuperposition beam_splitter(const CoherentSuperposition& state, std::string_view mode_i,
                                    std::string_view mode_j, std::string out_i, std::string out_j,
                                    const ToleranceConfig& tol) {
  require_distinct(out_i, out_j, "beam_splitter");
  auto labels = state.labels();
  labels[state.index_of(mode_i)] = std::move(out_i);
  labels[state.index_of(mode_j)] = std::move(out_j);
  // The constructor rejects an output label that collides with another mode.
  auto mixed = beam_splitter(state, mode_i, mode_j, tol);
  return mixed.relabeled(std::move(labels));
}

CoherentSuperposition beam_splitter_with_vacuum(const CoherentSuperposition& state, std::string_view mode,
                                                std::string new_label_1, std::string new_label_2,
                                                const ToleranceConfig& tol) {
  const std::size_t slot = state.index_of(mode);
  auto labels = state.labels();
  labels[slot] = std::move(new_label_1);
  labels.insert(labels.begin() + static_cast<std::ptrdiff_t>(slot) + 1, std::move(new_label_2));
  auto terms = state.terms();
  for (auto& t : terms) {
    const Complex half = t.amplitudes[slot] * kInvSqrt2;
    t.amplitudes[slot] = half;
    t.amplitudes.insert(t.amplitudes.begin() + static_cast<std::ptrdiff_t>(slot) + 1, half);
  }
  return canonicalize(CoherentSuperposition(std::move(labels), std::move(terms)), tol);
}

CoherentSuperposition swap_modes(const CoherentSuperposition& state, std::string_view mode_i,
                                 std::string_view mode_j) {
  const std::size_t i = state.index_of(mode_i);
  const std::size_t j = state.index_of(mode_j);
  auto labels = state.labels();
  std::swap(labels[i], labels[j]);
  auto terms = state.terms();
  for (auto& t : terms) std::swap(t.amplitudes[i], t.amplitudes[j]);
  return CoherentSuperposition(std::move(labels), std::move(terms));
}

SelectionOutcome select_vacuum_branch(const CoherentSuperposition& state, std::span<const std::string> modes,
                                      const ToleranceConfig& tol) {
  std::vector<std::size_t> slots;
  slots.reserve(modes.size());
  for (const auto& m : modes) slots.push_back(state.index_of(m));

  const double input_norm = norm_squared(state);
  if (!(input_norm > 0.0)) throw DegenerateStateError("select_vacuum_branch: input state has zero norm");

  const double threshold = vacuum_threshold(state, tol);
  std::vector<BranchTerm> kept;
  for (const auto& t : state.terms()) {
    const bool vacuum = std::all_of(slots.begin(), slots.end(),
                                    [&](std::size_t s) { return std::abs(t.amplitudes[s]) <= threshold; });
    if (vacuum) kept.push_back(t);
  }
  CoherentSuperposition branch(state.labels(), std::move(kept));
  const double probability = norm_squared(branch) / input_norm;
  for (const auto& m : modes) branch = branch.without_mode(m);
  return {canonicalize(branch, tol), probability};
}

SelectionOutcome project_vacuum(const CoherentSuperposition& state, std::string_view mode,
                                const ToleranceConfig& tol) {
  const std::size_t slot = state.index_of(mode);
  const double input_norm = norm_squared(state);
  if (!(input_norm > 0.0)) throw DegenerateStateError("project_vacuum: input state has zero norm");
  auto terms = state.terms();
  for (auto& t : terms) t.coefficient *= mode_overlap(0.0, t.amplitudes[slot]);
  auto projected = canonicalize(CoherentSuperposition(state.labels(), std::move(terms)).without_mode(mode), tol);
  return {projected, norm_squared(projected) / input_norm};
}

CoherentSuperposition discard_correlated_mode(const CoherentSuperposition& state, std::string_view mode,
                                              const ToleranceConfig& tol) {
  const std::size_t slot = state.index_of(mode);
  const auto reduced = state.without_mode(mode);
  const auto& full = state.terms();
  const auto& rest = reduced.terms();
  for (std::size_t a = 0; a < rest.size(); ++a) {
    for (std::size_t b = a + 1; b < rest.size(); ++b) {
      if (!amplitudes_match(rest[a].amplitudes, rest[b].amplitudes, tol.amp_merge_tol)) continue;
      const Complex da = full[a].amplitudes[slot];
      const Complex db = full[b].amplitudes[slot];
      if (std::abs(da.real() - db.real()) > tol.amp_merge_tol || std::abs(da.imag() - db.imag()) > tol.amp_merge_tol) {
        throw DecoherenceError("discard_correlated_mode: mode '" + std::string(mode) +
                               "' is not determined by the remaining modes");
      }
    }
  }
  return canonicalize(reduced, tol);
}

}  // namespace ecsim
