#pragma once

// Finite superpositions of multimode coherent-state product kets.
//
// A CoherentSuperposition is an ordered register of named modes plus a list
// of branch terms; each term carries a complex coefficient and one complex
// coherent amplitude per mode. Inner products are exact Gram contractions
// over the (non-orthogonal) coherent family.

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ecsim {

using Complex = std::complex<double>;

struct ToleranceConfig {
  double amp_merge_tol = 1e-9;   // absolute, per amplitude component
  double coeff_zero_tol = 1e-12; // absolute, on |coefficient|

  /// Throws std::invalid_argument unless both tolerances are finite and > 0.
  void validate() const;
};

struct BranchTerm {
  Complex coefficient;
  std::vector<Complex> amplitudes;

  bool operator==(const BranchTerm&) const = default;
};

class CoherentSuperposition {
 public:
  /// Zero modes, zero terms (the zero vector of the empty register).
  CoherentSuperposition() = default;

  /// Validates unique labels, term arity and finiteness. Terms are stored as
  /// given; call canonicalize() for the merged, sorted form.
  CoherentSuperposition(std::vector<std::string> labels, std::vector<BranchTerm> terms = {});

  /// The scalar `c` on the empty register; the unit for tensor_product.
  static CoherentSuperposition scalar(Complex c = 1.0);
  /// Single-mode coherent state |amplitude> on `label`.
  static CoherentSuperposition coherent(std::string label, Complex amplitude);
  static CoherentSuperposition vacuum(std::string label) { return coherent(std::move(label), 0.0); }

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<BranchTerm>& terms() const noexcept { return terms_; }
  std::size_t mode_count() const noexcept { return labels_.size(); }
  std::size_t term_count() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  bool has_mode(std::string_view label) const noexcept;
  /// Slot index of `label`; throws ShapeError if absent.
  std::size_t index_of(std::string_view label) const;

  CoherentSuperposition scaled(Complex factor) const;
  /// Same terms, new register names (same length, unique).
  CoherentSuperposition relabeled(std::vector<std::string> labels) const;
  CoherentSuperposition renamed(std::string_view from, std::string to) const;
  /// Drops the slot of `label` from every term without any merging.
  CoherentSuperposition without_mode(std::string_view label) const;

 private:
  std::vector<std::string> labels_;
  std::vector<BranchTerm> terms_;
};

/// <u|v> = exp(-|u|^2/2 - |v|^2/2 + conj(u) v).
Complex mode_overlap(Complex u, Complex v);

/// Sum_jk conj(c_j) d_k prod_m <u_jm|v_km>. Modes are matched by slot position.
Complex inner_product(const CoherentSuperposition& lhs, const CoherentSuperposition& rhs);

double norm_squared(const CoherentSuperposition& state);

CoherentSuperposition normalize(const CoherentSuperposition& state,
                                const ToleranceConfig& tol = {});

/// Merges terms whose amplitude vectors agree within tol.amp_merge_tol,
/// drops coefficients with magnitude <= tol.coeff_zero_tol and sorts terms
/// lexicographically by amplitude (re, im) pairs.
CoherentSuperposition canonicalize(const CoherentSuperposition& state,
                                   const ToleranceConfig& tol = {});

/// Register of `lhs` followed by register of `rhs`; labels must be disjoint.
CoherentSuperposition tensor_product(const CoherentSuperposition& lhs,
                                     const CoherentSuperposition& rhs,
                                     const ToleranceConfig& tol = {});

/// |<target|state>|^2 / (|target|^2 |state|^2).
double fidelity(const CoherentSuperposition& state, const CoherentSuperposition& target);

/// True when every component of the two amplitude vectors differs by at most `tol`.
bool amplitudes_match(const std::vector<Complex>& a, const std::vector<Complex>& b, double tol);

}  // namespace ecsim
