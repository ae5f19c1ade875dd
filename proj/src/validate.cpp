#include "ecsim/validate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "ecsim/coherent.hpp"
#include "ecsim/optics.hpp"
#include "ecsim/protocols.hpp"

namespace ecsim {

namespace {

class Draws {
 public:
  explicit Draws(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  // Coefficient in [-1, 1] kept away from 0 so no term vanishes.
  double coefficient() {
    const double magnitude = uniform(0.05, 1.0);
    return uniform(0.0, 1.0) < 0.5 ? -magnitude : magnitude;
  }
  Complex complex(double scale) { return {uniform(-scale, scale), uniform(-scale, scale)}; }

  CoherentSuperposition state(std::size_t max_terms, std::size_t modes) {
    std::vector<std::string> labels;
    for (std::size_t m = 0; m < modes; ++m) labels.push_back("m" + std::to_string(m));
    std::vector<BranchTerm> terms(index(1, max_terms));
    for (auto& t : terms) {
      t.coefficient = complex(1.0);
      for (std::size_t m = 0; m < modes; ++m) t.amplitudes.push_back(complex(1.5));
    }
    return CoherentSuperposition(std::move(labels), std::move(terms));
  }

 private:
  std::mt19937_64 rng_;
};

class Check {
 public:
  Check(std::string name, double tolerance) : result_{std::move(name), true, 0.0, tolerance, {}} {}

  void observe(double deviation) {
    if (!std::isfinite(deviation)) deviation = INFINITY;
    result_.max_deviation = std::max(result_.max_deviation, deviation);
  }
  void fail(std::string detail) {
    result_.passed = false;
    if (result_.detail.empty()) result_.detail = std::move(detail);
  }
  CheckResult finish() {
    if (result_.max_deviation > result_.tolerance) result_.passed = false;
    return std::move(result_);
  }

 private:
  CheckResult result_;
};

double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double mutated_n3(const Ecp2Params& q) {
  const auto [a, b, g, d, e] = q;
  const double x = a * a;
  const double radicand = b * b + g * g + d * d + e * e + 2 * (b * g + b * d - g * e - d * e) * std::exp(-4 * x) -
                          2 * (d * g - e * b) * std::exp(-8 * x);
  return 1.0 / std::sqrt(radicand);
}

Ecp1Params draw_ecp1(Draws& d, double alpha_lo) { return {d.uniform(alpha_lo, 3.0), d.coefficient(), d.coefficient()}; }

Ecp2Params draw_ecp2(Draws& d, double alpha_lo) {
  return {d.uniform(alpha_lo, 3.0), d.coefficient(), d.coefficient(), d.coefficient(), d.coefficient()};
}

// 1 / N^2 against the Gram norm of the unnormalized state.
CheckResult normalization_check(const std::string& name, int draws, Draws& d,
                                const std::function<std::pair<double, double>(Draws&)>& sample) {
  Check c(name + " closed form vs Gram norm", 1e-12);
  for (int i = 0; i < draws; ++i) {
    const auto [gram, closed] = sample(d);
    c.observe(relative(gram * closed * closed, 1.0));
  }
  return c.finish();
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& options) {
  Draws d(options.seed);
  const int draws = options.draws;
  std::vector<CheckResult> results;

  results.push_back(normalization_check("N1", draws, d, [](Draws& r) {
    const auto p = draw_ecp1(r, 0.2);
    return std::pair{norm_squared(build_partial_ecp1(p, kClusterModes, Scaling::raw)), n1(p)};
  }));
  results.push_back(normalization_check("N2", draws, d, [](Draws& r) {
    const auto p = draw_ecp1(r, 0.2);
    return std::pair{norm_squared(build_ancilla_single(p, "e", Scaling::raw)), n2(p)};
  }));
  const bool flip = options.fault == InjectedFault::n3_sign_flip;
  results.push_back(normalization_check("N3", draws, d, [flip](Draws& r) {
    const auto q = draw_ecp2(r, 0.2);
    return std::pair{norm_squared(build_partial_ecp2(q, kClusterModes, Scaling::raw)), flip ? mutated_n3(q) : n3(q)};
  }));
  results.push_back(normalization_check("N4", draws, d, [](Draws& r) {
    const auto q = draw_ecp2(r, 0.2);
    return std::pair{norm_squared(build_ancilla_two_mode(q, {"e", "f"}, Scaling::raw)), n4(q)};
  }));
  results.push_back(normalization_check("N5", draws, d, [](Draws& r) {
    const auto q = draw_ecp2(r, 0.2);
    return std::pair{norm_squared(build_ancilla_g(q, "g", Scaling::raw)), n5(q)};
  }));

  {
    Check prob("ecp1 success probability: pipeline vs 4|N1 N2 beta gamma|^2", 1e-9);
    Check fid("ecp1 final fidelity with cluster pattern", 1e-10);
    for (int i = 0; i < 2 * draws; ++i) {
      const auto p = draw_ecp1(d, 0.3);
      const auto report = run_ecp1(p);
      prob.observe(relative(report.p_exact, report.p_formula));
      fid.observe(std::abs(1.0 - report.final_fidelity));
    }
    results.push_back(prob.finish());
    results.push_back(fid.finish());
  }
  {
    Check prob("ecp2 success probability: pipeline vs 4|N3 N4 N5 beta gamma delta eta|^2", 1e-9);
    Check fid("ecp2 final fidelity with cluster pattern", 1e-10);
    for (int i = 0; i < 2 * draws; ++i) {
      const auto q = draw_ecp2(d, 0.3);
      const auto report = run_ecp2(q);
      prob.observe(relative(report.p_exact, report.p_formula));
      fid.observe(std::abs(1.0 - report.final_fidelity));
    }
    results.push_back(prob.finish());
    results.push_back(fid.finish());
  }
  {
    Check bs("beam splitter preserves norm", 1e-12);
    Check sw("swap preserves norm", 1e-12);
    Check twice("beam splitter applied twice is the identity", 1e-12);
    for (int i = 0; i < 5 * draws; ++i) {
      const std::size_t modes = d.index(2, 6);
      const auto s = d.state(16, modes);
      const std::string mi = s.labels()[0], mj = s.labels()[modes - 1];
      const double n0 = norm_squared(s);
      bs.observe(std::abs(norm_squared(beam_splitter(s, mi, mj)) - n0) / n0);
      sw.observe(std::abs(norm_squared(swap_modes(s, mi, mj)) - n0) / n0);

      // Uncanonicalized, so term order is preserved for a slot-wise comparison.
      for (const auto& t : s.terms()) {
        const Complex u = t.amplitudes.front(), v = t.amplitudes.back();
        CoherentSuperposition single(s.labels(), {t});
        const auto out = beam_splitter(beam_splitter(single, mi, mj), mi, mj);
        const auto& a = out.terms().front().amplitudes;
        twice.observe(std::max(std::abs(a.front() - u), std::abs(a.back() - v)));
      }
    }
    results.push_back(bs.finish());
    results.push_back(sw.finish());
    results.push_back(twice.finish());
  }
  {
    Check idem("canonicalize is idempotent and preserves inner products", 1e-10);
    Check herm("inner product Hermitian symmetry", 1e-12);
    Check cs("Cauchy-Schwarz", 1e-10);
    for (int i = 0; i < draws; ++i) {
      const std::size_t modes = d.index(1, 5);
      auto x = d.state(8, modes);
      const auto y = d.state(8, modes);
      // Duplicate a term so canonicalize has something to merge.
      auto terms = x.terms();
      terms.push_back(terms.front());
      x = CoherentSuperposition(x.labels(), terms);
      const auto once = canonicalize(x);
      const auto twice_c = canonicalize(once);
      if (!(once.terms() == twice_c.terms())) idem.fail("second canonicalize changed the terms");
      idem.observe(std::abs(inner_product(y, once) - inner_product(y, x)));
      herm.observe(std::abs(inner_product(x, y) - std::conj(inner_product(y, x))));
      cs.observe(std::max(0.0, std::norm(inner_product(x, y)) - norm_squared(x) * norm_squared(y)));
    }
    results.push_back(idem.finish());
    results.push_back(herm.finish());
    results.push_back(cs.finish());
  }
  return results;
}

}  // namespace ecsim
