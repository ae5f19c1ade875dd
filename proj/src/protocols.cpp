#include "ecsim/protocols.hpp"

#include <cfloat>
#include <cmath>
#include <stdexcept>

#include "ecsim/errors.hpp"
#include "ecsim/optics.hpp"

namespace ecsim {

namespace {

// Sign patterns of the four cluster kets, in units of alpha, over (a, b, c, d).
constexpr std::array<std::array<int, 4>, 4> kClusterKets{{
    {+1, +1, +1, +1},
    {-1, -1, +1, +1},
    {+1, +1, -1, -1},
    {-1, -1, -1, -1},
}};

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be finite");
}

void require_alpha(double alpha) {
  if (!std::isfinite(alpha) || !(alpha > 0.0)) throw std::invalid_argument("alpha must be finite and > 0");
}

double inverse_sqrt(double radicand, const char* name) {
  if (!std::isfinite(radicand) || !(radicand > 0.0)) {
    throw DegenerateStateError(std::string(name) + ": normalization radicand is not positive");
  }
  return 1.0 / std::sqrt(radicand);
}

// cos/sin of exact quarter turns land on ~6e-17 instead of 0.
double snap_zero(double x) { return std::abs(x) < 4.0 * DBL_EPSILON ? 0.0 : x; }

CoherentSuperposition cluster_state(double alpha, const Labels4& modes, const std::array<double, 4>& weights) {
  std::vector<BranchTerm> terms;
  for (std::size_t k = 0; k < 4; ++k) {
    BranchTerm t{weights[k], {}};
    for (int s : kClusterKets[k]) t.amplitudes.emplace_back(s * alpha);
    terms.push_back(std::move(t));
  }
  return canonicalize(CoherentSuperposition({modes.begin(), modes.end()}, std::move(terms)));
}

StageRecord record(const char* name, const CoherentSuperposition& s) { return {name, s, norm_squared(s)}; }

double final_fidelity_against_cluster(double alpha, const CoherentSuperposition& final_state) {
  if (final_state.empty()) return 0.0;
  const auto& l = final_state.labels();
  return fidelity(final_state, cluster_pattern(alpha, {l[0], l[1], l[2], l[3]}));
}

}  // namespace

void Ecp1Params::validate() const {
  require_alpha(alpha);
  require_finite(beta, "beta");
  require_finite(gamma, "gamma");
  if (beta == 0.0 && gamma == 0.0) throw DegenerateStateError("ecp1: beta and gamma are both zero");
}

void Ecp2Params::validate() const {
  require_alpha(alpha);
  require_finite(beta, "beta");
  require_finite(gamma, "gamma");
  require_finite(delta, "delta");
  require_finite(eta, "eta");
  if (beta == 0.0 && gamma == 0.0 && delta == 0.0 && eta == 0.0) {
    throw DegenerateStateError("ecp2: all coefficients are zero");
  }
}

Coefficients4 theta_to_coefficients(const ThetaParams& t) {
  const double c1 = snap_zero(std::cos(t.theta1)), s1 = snap_zero(std::sin(t.theta1));
  const double c2 = snap_zero(std::cos(t.theta2)), s2 = snap_zero(std::sin(t.theta2));
  const double c3 = snap_zero(std::cos(t.theta3)), s3 = snap_zero(std::sin(t.theta3));
  return {c3, s3 * c2, s3 * s2 * c1, s3 * s2 * s1};
}

Ecp2Params ecp2_from_theta(double alpha, const ThetaParams& t) {
  const auto c = theta_to_coefficients(t);
  return {alpha, c.beta, c.gamma, c.delta, c.eta};
}

CoherentSuperposition cluster_pattern(double alpha, const Labels4& modes) {
  require_alpha(alpha);
  return cluster_state(alpha, modes, {0.5, 0.5, 0.5, -0.5});
}

CoherentSuperposition build_target_mes(double alpha) { return cluster_pattern(alpha, kClusterModes); }

double n1(const Ecp1Params& p) {
  const double b2 = p.beta * p.beta, g2 = p.gamma * p.gamma;
  const double x = p.alpha * p.alpha;
  return inverse_sqrt(2 * b2 + 2 * g2 + 2 * std::exp(-4 * x) * (b2 - g2), "N1");
}

double n2(const Ecp1Params& p) {
  const double x = p.alpha * p.alpha;
  return inverse_sqrt(p.beta * p.beta + p.gamma * p.gamma + 2 * p.beta * p.gamma * std::exp(-2 * x), "N2");
}

double n3(const Ecp2Params& q) {
  const auto [a, b, g, d, e] = q;
  const double x = a * a;
  return inverse_sqrt(b * b + g * g + d * d + e * e + 2 * (b * g + b * d - g * e - d * e) * std::exp(-4 * x) +
                          2 * (d * g - e * b) * std::exp(-8 * x),
                      "N3");
}

double n4(const Ecp2Params& q) {
  const auto [a, b, g, d, e] = q;
  const double x = a * a;
  return inverse_sqrt(b * b + g * g + d * d + e * e + 2 * (b * g + b * d + e * g + d * e) * std::exp(-2 * x) +
                          2 * (d * g + e * b) * std::exp(-4 * x),
                      "N4");
}

double n5(const Ecp2Params& q) {
  const auto [a, b, g, d, e] = q;
  const double x = a * a;
  return inverse_sqrt(b * b * g * g + d * d * e * e + 2 * b * g * d * e * std::exp(-2 * x), "N5");
}

CoherentSuperposition build_partial_ecp1(const Ecp1Params& p, const Labels4& modes, Scaling scaling) {
  p.validate();
  const double scale = scaling == Scaling::normalized ? n1(p) : 1.0;
  const double b = scale * p.beta, g = scale * p.gamma;
  return cluster_state(p.alpha, modes, {b, b, g, -g});
}

CoherentSuperposition build_ancilla_single(const Ecp1Params& p, const std::string& mode, Scaling scaling) {
  p.validate();
  const double scale = scaling == Scaling::normalized ? n2(p) : 1.0;
  return canonicalize(CoherentSuperposition(
      {mode}, {BranchTerm{scale * p.beta, {p.alpha}}, BranchTerm{scale * p.gamma, {-p.alpha}}}));
}

CoherentSuperposition build_partial_ecp2(const Ecp2Params& q, const Labels4& modes, Scaling scaling) {
  q.validate();
  const double scale = scaling == Scaling::normalized ? n3(q) : 1.0;
  return cluster_state(q.alpha, modes, {scale * q.beta, scale * q.gamma, scale * q.delta, -scale * q.eta});
}

CoherentSuperposition build_ancilla_two_mode(const Ecp2Params& q, const std::array<std::string, 2>& modes,
                                             Scaling scaling) {
  q.validate();
  const double scale = scaling == Scaling::normalized ? n4(q) : 1.0;
  const double a = q.alpha;
  return canonicalize(CoherentSuperposition({modes[0], modes[1]}, {
                                                                      BranchTerm{scale * q.beta, {a, a}},
                                                                      BranchTerm{scale * q.gamma, {a, -a}},
                                                                      BranchTerm{scale * q.delta, {-a, a}},
                                                                      BranchTerm{scale * q.eta, {-a, -a}},
                                                                  }));
}

CoherentSuperposition build_ancilla_g(const Ecp2Params& q, const std::string& mode, Scaling scaling) {
  q.validate();
  const double scale = scaling == Scaling::normalized ? n5(q) : 1.0;
  return canonicalize(CoherentSuperposition({mode}, {BranchTerm{scale * q.beta * q.gamma, {q.alpha}},
                                                     BranchTerm{scale * q.delta * q.eta, {-q.alpha}}}));
}

double formula_p_ecp1(const Ecp1Params& p) {
  p.validate();
  const double amp = n1(p) * n2(p) * p.beta * p.gamma;
  return 4.0 * amp * amp;
}

double formula_p_ecp2(const Ecp2Params& q) {
  q.validate();
  const double product = q.beta * q.gamma * q.delta * q.eta;
  if (product == 0.0) return 0.0;
  const double amp = n3(q) * n4(q) * n5(q) * product;
  return 4.0 * amp * amp;
}

const StageRecord& ProtocolReport::stage(std::string_view name) const {
  for (const auto& s : stages) {
    if (s.name == name) return s;
  }
  throw std::out_of_range("no stage named '" + std::string(name) + "'");
}

std::vector<std::size_t> ProtocolReport::term_counts() const {
  std::vector<std::size_t> counts;
  for (const auto& s : stages) counts.push_back(s.term_count());
  return counts;
}

ProtocolReport run_ecp1(const Ecp1Params& p, const ToleranceConfig& tol) {
  p.validate();
  ProtocolReport report;
  report.protocol = "ecp1";
  report.parameters = {{"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma}};

  auto state = tensor_product(build_partial_ecp1(p), build_ancilla_single(p, "e"), tol);
  report.stages.push_back(record(stage::kCombined, state));

  state = beam_splitter(state, "d", "e", "d1", "e1", tol);
  report.stages.push_back(record(stage::kMixed, state));

  const std::vector<std::string> vacuum_modes{"d1"};
  auto selected = select_vacuum_branch(state, vacuum_modes, tol);
  report.p_exact = selected.probability;
  state = selected.state;
  report.stages.push_back(record(stage::kSelected, state));

  state = beam_splitter_with_vacuum(state, "e1", "e2", "e3", tol);
  report.stages.push_back(record(stage::kSplit, state));

  state = discard_correlated_mode(state, "e3", tol);
  report.stages.push_back(record(stage::kDetected, state));

  report.p_formula = formula_p_ecp1(p);
  report.final_fidelity = final_fidelity_against_cluster(p.alpha, state);
  report.final_state = std::move(state);
  return report;
}

ProtocolReport run_ecp2(const Ecp2Params& q, const ToleranceConfig& tol) {
  q.validate();
  ProtocolReport report;
  report.protocol = "ecp2";
  report.parameters = {{"alpha", q.alpha}, {"beta", q.beta}, {"gamma", q.gamma}, {"delta", q.delta}, {"eta", q.eta}};

  auto state = tensor_product(tensor_product(build_partial_ecp2(q), build_ancilla_two_mode(q, {"e", "f"}), tol),
                              build_ancilla_g(q, "g"), tol);
  report.stages.push_back(record(stage::kCombined, state));

  state = beam_splitter(state, "a", "f", "a1", "f1", tol);
  state = beam_splitter(state, "c", "e", "c1", "e1", tol);
  state = beam_splitter(state, "d", "g", "d1", "g1", tol);
  report.stages.push_back(record(stage::kMixed, state));

  const std::vector<std::string> vacuum_modes{"a1", "d1", "e1"};
  auto selected = select_vacuum_branch(state, vacuum_modes, tol);
  report.p_exact = selected.probability;
  state = selected.state;
  report.stages.push_back(record(stage::kSelected, state));

  state = swap_modes(state, "c1", "f1");
  report.stages.push_back(record(stage::kSwapped, state));

  state = beam_splitter_with_vacuum(state, "f1", "f2", "f3", tol);
  state = beam_splitter_with_vacuum(state, "c1", "c2", "c3", tol);
  state = beam_splitter_with_vacuum(state, "g1", "g2", "g3", tol);
  report.stages.push_back(record(stage::kSplit, state));

  for (const char* mode : {"f2", "c2", "g2"}) state = discard_correlated_mode(state, mode, tol);
  report.stages.push_back(record(stage::kDetected, state));

  report.p_formula = formula_p_ecp2(q);
  report.final_fidelity = final_fidelity_against_cluster(q.alpha, state);
  report.final_state = std::move(state);
  return report;
}

}  // namespace ecsim
