#include "ecsim/coherent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#include "ecsim/errors.hpp"

namespace ecsim {

namespace {

bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Exponent of <u|v>; products of overlaps are summed here and exponentiated once.
Complex overlap_exponent(Complex u, Complex v) {
  return -0.5 * std::norm(u) - 0.5 * std::norm(v) + std::conj(u) * v;
}

bool amplitude_less(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  for (std::size_t m = 0; m < a.size(); ++m) {
    if (a[m].real() != b[m].real()) return a[m].real() < b[m].real();
    if (a[m].imag() != b[m].imag()) return a[m].imag() < b[m].imag();
  }
  return false;
}

}  // namespace

void ToleranceConfig::validate() const {
  if (!(amp_merge_tol > 0.0) || !std::isfinite(amp_merge_tol) || !(coeff_zero_tol > 0.0) ||
      !std::isfinite(coeff_zero_tol)) {
    throw std::invalid_argument("tolerances must be finite and strictly positive");
  }
}

CoherentSuperposition::CoherentSuperposition(std::vector<std::string> labels,
                                             std::vector<BranchTerm> terms)
    : labels_(std::move(labels)), terms_(std::move(terms)) {
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_) {
    if (l.empty()) throw ShapeError("empty mode label");
    if (!seen.insert(l).second) throw ShapeError("duplicate mode label '" + l + "'");
  }
  for (const auto& t : terms_) {
    if (t.amplitudes.size() != labels_.size()) {
      throw ShapeError("term has " + std::to_string(t.amplitudes.size()) + " amplitudes, register has " +
                       std::to_string(labels_.size()) + " modes");
    }
    if (!is_finite(t.coefficient)) throw std::invalid_argument("non-finite term coefficient");
    for (const auto& a : t.amplitudes) {
      if (!is_finite(a)) throw std::invalid_argument("non-finite coherent amplitude");
    }
  }
}

CoherentSuperposition CoherentSuperposition::scalar(Complex c) {
  return CoherentSuperposition({}, {BranchTerm{c, {}}});
}

CoherentSuperposition CoherentSuperposition::coherent(std::string label, Complex amplitude) {
  return CoherentSuperposition({std::move(label)}, {BranchTerm{1.0, {amplitude}}});
}

bool CoherentSuperposition::has_mode(std::string_view label) const noexcept {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t CoherentSuperposition::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw ShapeError("unknown mode label '" + std::string(label) + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

CoherentSuperposition CoherentSuperposition::scaled(Complex factor) const {
  auto terms = terms_;
  for (auto& t : terms) t.coefficient *= factor;
  return CoherentSuperposition(labels_, std::move(terms));
}

CoherentSuperposition CoherentSuperposition::relabeled(std::vector<std::string> labels) const {
  if (labels.size() != labels_.size()) {
    throw ShapeError("relabel needs " + std::to_string(labels_.size()) + " labels");
  }
  return CoherentSuperposition(std::move(labels), terms_);
}

CoherentSuperposition CoherentSuperposition::renamed(std::string_view from, std::string to) const {
  auto labels = labels_;
  labels[index_of(from)] = std::move(to);
  return CoherentSuperposition(std::move(labels), terms_);
}

CoherentSuperposition CoherentSuperposition::without_mode(std::string_view label) const {
  const std::size_t slot = index_of(label);
  auto labels = labels_;
  labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(slot));
  auto terms = terms_;
  for (auto& t : terms) t.amplitudes.erase(t.amplitudes.begin() + static_cast<std::ptrdiff_t>(slot));
  return CoherentSuperposition(std::move(labels), std::move(terms));
}

Complex mode_overlap(Complex u, Complex v) {
  if (!is_finite(u) || !is_finite(v)) throw std::invalid_argument("mode_overlap: non-finite amplitude");
  return std::exp(overlap_exponent(u, v));
}

Complex inner_product(const CoherentSuperposition& lhs, const CoherentSuperposition& rhs) {
  if (lhs.mode_count() != rhs.mode_count()) {
    throw ShapeError("inner_product: mode counts differ (" + std::to_string(lhs.mode_count()) + " vs " +
                     std::to_string(rhs.mode_count()) + ")");
  }
  const std::size_t modes = lhs.mode_count();
  Complex sum = 0.0;
  for (const auto& tl : lhs.terms()) {
    for (const auto& tr : rhs.terms()) {
      Complex exponent = 0.0;
      for (std::size_t m = 0; m < modes; ++m) exponent += overlap_exponent(tl.amplitudes[m], tr.amplitudes[m]);
      sum += std::conj(tl.coefficient) * tr.coefficient * std::exp(exponent);
    }
  }
  return sum;
}

double norm_squared(const CoherentSuperposition& state) {
  // The imaginary part is rounding residue only.
  return std::max(0.0, inner_product(state, state).real());
}

CoherentSuperposition normalize(const CoherentSuperposition& state, const ToleranceConfig& tol) {
  const double n2 = norm_squared(state);
  if (!(n2 > tol.coeff_zero_tol)) throw DegenerateStateError("cannot normalize a zero-norm state");
  return state.scaled(1.0 / std::sqrt(n2));
}

bool amplitudes_match(const std::vector<Complex>& a, const std::vector<Complex>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t m = 0; m < a.size(); ++m) {
    if (std::abs(a[m].real() - b[m].real()) > tol || std::abs(a[m].imag() - b[m].imag()) > tol) return false;
  }
  return true;
}

CoherentSuperposition canonicalize(const CoherentSuperposition& state, const ToleranceConfig& tol) {
  tol.validate();
  std::vector<BranchTerm> merged;
  merged.reserve(state.term_count());
  for (const auto& t : state.terms()) {
    auto it = std::find_if(merged.begin(), merged.end(), [&](const BranchTerm& m) {
      return amplitudes_match(m.amplitudes, t.amplitudes, tol.amp_merge_tol);
    });
    if (it == merged.end()) {
      merged.push_back(t);
    } else {
      it->coefficient += t.coefficient;
    }
  }
  std::erase_if(merged, [&](const BranchTerm& t) { return std::abs(t.coefficient) <= tol.coeff_zero_tol; });
  std::stable_sort(merged.begin(), merged.end(),
                   [](const BranchTerm& a, const BranchTerm& b) { return amplitude_less(a.amplitudes, b.amplitudes); });
  return CoherentSuperposition(state.labels(), std::move(merged));
}

CoherentSuperposition tensor_product(const CoherentSuperposition& lhs, const CoherentSuperposition& rhs,
                                     const ToleranceConfig& tol) {
  std::vector<std::string> labels = lhs.labels();
  for (const auto& l : rhs.labels()) {
    if (lhs.has_mode(l)) throw ShapeError("tensor_product: mode '" + l + "' appears on both sides");
    labels.push_back(l);
  }
  std::vector<BranchTerm> terms;
  terms.reserve(lhs.term_count() * rhs.term_count());
  for (const auto& a : lhs.terms()) {
    for (const auto& b : rhs.terms()) {
      BranchTerm t{a.coefficient * b.coefficient, a.amplitudes};
      t.amplitudes.insert(t.amplitudes.end(), b.amplitudes.begin(), b.amplitudes.end());
      terms.push_back(std::move(t));
    }
  }
  return canonicalize(CoherentSuperposition(std::move(labels), std::move(terms)), tol);
}

double fidelity(const CoherentSuperposition& state, const CoherentSuperposition& target) {
  const double ns = norm_squared(state);
  const double nt = norm_squared(target);
  if (!(ns > 0.0) || !(nt > 0.0)) throw DegenerateStateError("fidelity of a zero-norm state");
  return std::norm(inner_product(target, state)) / (ns * nt);
}

}  // namespace ecsim
