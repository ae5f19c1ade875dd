#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "ecsim/errors.hpp"
#include "ecsim/protocols.hpp"
#include "json.hpp"
#include "oracle.hpp"

using namespace ecsim;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("theta parameterization") {
  const auto c = theta_to_coefficients({std::numbers::pi / 4, std::numbers::pi / 4, std::numbers::pi / 6});
  CHECK(c.beta == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-15));
  CHECK(c.gamma == doctest::Approx(0.25 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(c.delta == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(c.eta == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(c.beta * c.beta + c.gamma * c.gamma + c.delta * c.delta + c.eta * c.eta == doctest::Approx(1.0));

  const auto edge = theta_to_coefficients({std::numbers::pi / 2, std::numbers::pi / 2, std::numbers::pi / 2});
  CHECK(edge.beta == 0.0);
  CHECK(edge.gamma == 0.0);
  CHECK(edge.delta == 0.0);
  CHECK(edge.eta == doctest::Approx(1.0));
}

TEST_CASE("normalization constants against the oracle formulas and frozen values") {
  const Ecp1Params p{1.0, 0.6, 0.8};
  CHECK(n1(p) == doctest::Approx(0.70892694078159158).epsilon(1e-14));
  CHECK(n2(p) == doctest::Approx(0.94075339074587158).epsilon(1e-14));
  CHECK(1.0 / (n1(p) * n1(p)) == doctest::Approx(2.0 - 0.56 * std::exp(-4.0)).epsilon(1e-14));
  const Ecp2Params half{1.0, 0.5, 0.5, 0.5, 0.5};
  CHECK(n5(half) == doctest::Approx(2.6545012005691502).epsilon(1e-14));
  CHECK(n5(half) == doctest::Approx(1.0 / std::sqrt(0.125 + 0.125 * std::exp(-2.0))).epsilon(1e-14));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> alpha(0.2, 3.0), coef(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double al = alpha(rng), b = coef(rng), g = coef(rng), d = coef(rng), e = coef(rng);
    CHECK(rel(n1({al, b, g}), oracle::n1(al, b, g)) < 1e-13);
    CHECK(rel(n2({al, b, g}), oracle::n2(al, b, g)) < 1e-13);
    CHECK(rel(n3({al, b, g, d, e}), oracle::n3(al, b, g, d, e)) < 1e-13);
    CHECK(rel(n4({al, b, g, d, e}), oracle::n4(al, b, g, d, e)) < 1e-13);
    CHECK(rel(n5({al, b, g, d, e}), oracle::n5(al, b, g, d, e)) < 1e-13);
    // The oracle formulas themselves agree with brute-force Gram norms.
    CHECK(rel(oracle::norm2(oracle::partial_ecp1(al, b, g)), std::pow(oracle::n1(al, b, g), -2)) < 1e-12);
    CHECK(rel(oracle::norm2(oracle::ancilla_ef(al, b, g, d, e)), std::pow(oracle::n4(al, b, g, d, e), -2)) < 1e-12);
  }
}

TEST_CASE("degenerate and invalid parameters") {
  CHECK_THROWS_AS(n2({1.0, 0.0, 0.0}), DegenerateStateError);
  CHECK_THROWS_AS(n5({1.0, 0.0, 1.0, 0.0, 1.0}), DegenerateStateError);
  CHECK_THROWS_AS(run_ecp1({1.0, 0.0, 0.0}), DegenerateStateError);
  CHECK_THROWS_AS(run_ecp1({0.0, 0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(run_ecp1({1.0, NAN, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(run_ecp2({-1.0, 0.5, 0.5, 0.5, 0.5}), std::invalid_argument);
  CHECK(formula_p_ecp2({1.0, 0.0, 1.0, 0.0, 1.0}) == 0.0);
}

TEST_CASE("built states are normalized and follow the cluster pattern") {
  const Ecp1Params p{0.7, 0.3, -0.9};
  CHECK(norm_squared(build_partial_ecp1(p)) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(norm_squared(build_ancilla_single(p)) == doctest::Approx(1.0).epsilon(1e-13));
  const Ecp2Params q{0.7, 0.3, -0.9, 0.2, 0.5};
  CHECK(norm_squared(build_partial_ecp2(q)) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(norm_squared(build_ancilla_two_mode(q)) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(norm_squared(build_ancilla_g(q)) == doctest::Approx(1.0).epsilon(1e-13));

  const auto target = build_target_mes(1.5);
  const oracle::Kets ref = oracle::cluster(1.5);
  CHECK(norm_squared(target) == doctest::Approx(oracle::norm2(ref)).epsilon(1e-14));
  CHECK(target.labels() == std::vector<std::string>{"a", "b", "c", "d"});
}

TEST_CASE("ecp1 frozen values") {
  const auto r = run_ecp1({2.0, std::sqrt(0.5), std::sqrt(0.5)});
  const double expected = 1.0 / (2.0 * (1.0 + std::exp(-8.0)));
  CHECK(rel(r.p_exact, expected) < 1e-12);
  CHECK(rel(r.p_exact, 0.49983232493476676) < 1e-12);
  CHECK(rel(r.p_formula, expected) < 1e-12);
  CHECK(r.final_fidelity == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rel(run_ecp1({1.0, 0.6, 0.8}).p_exact, 0.40991802189533836) < 1e-12);
}

TEST_CASE("ecp1 pipeline structure") {
  const double alpha = 1.7;
  const auto r = run_ecp1({alpha, 0.6, 0.8});
  CHECK(r.term_counts() == std::vector<std::size_t>{8, 8, 4, 4, 4});
  CHECK(r.final_state.labels() == std::vector<std::string>{"a", "b", "c", "e2"});
  const auto& selected = r.stage(stage::kSelected).state;
  const auto e1 = selected.index_of("e1");
  for (const auto& t : selected.terms()) CHECK(std::abs(std::abs(t.amplitudes[e1]) - std::sqrt(2.0) * alpha) < 1e-12);
  // Detection is deterministic.
  CHECK(r.stage(stage::kDetected).norm_squared == doctest::Approx(r.stage(stage::kSelected).norm_squared).epsilon(1e-13));
  CHECK_THROWS_AS(r.stage("nonexistent"), std::out_of_range);
}

TEST_CASE("ecp1 agrees with the longhand oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> alpha(0.3, 3.0), coef(-1.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    const double al = alpha(rng), b = coef(rng), g = coef(rng);
    const auto r = run_ecp1({al, b, g});
    const auto o = oracle::ecp1(al, b, g);
    CHECK(rel(r.p_exact, o.probability) < 1e-10);
    CHECK(o.kept_terms == 4);
    CHECK(o.fidelity == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.final_fidelity == doctest::Approx(1.0).epsilon(1e-10));
    // Exchanging beta and gamma only flips the sign of the exp(-4 alpha^2) term of 1/N1^2.
    const double sum = b * b + g * g, x = std::exp(-4 * al * al) * (b * b - g * g);
    CHECK(rel(r.p_exact / run_ecp1({al, g, b}).p_exact, (sum - x) / (sum + x)) < 1e-10);
    CHECK(rel(run_ecp1({al, g, b}).p_exact, oracle::ecp1(al, g, b).probability) < 1e-10);
  }
}

TEST_CASE("ecp2 frozen values and structure") {
  const auto q = ecp2_from_theta(2.0, {std::numbers::pi / 4, std::numbers::pi / 4, std::numbers::pi / 6});
  const auto r = run_ecp2(q);
  CHECK(rel(r.p_exact, 0.014991250983147922) < 1e-10);
  CHECK(rel(r.p_formula, 0.014991250983147922) < 1e-12);
  CHECK(r.final_fidelity == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.term_counts() == std::vector<std::size_t>{32, 32, 4, 4, 4, 4});
  CHECK(r.final_state.labels() == std::vector<std::string>{"b", "f3", "c3", "g3"});
  for (const char* mode : {"c1", "f1", "g1"}) {
    const auto& s = r.stage(stage::kSwapped).state;
    const auto slot = s.index_of(mode);
    for (const auto& t : s.terms()) CHECK(std::abs(std::abs(t.amplitudes[slot]) - std::sqrt(8.0)) < 1e-12);
  }
  CHECK(rel(run_ecp2({1.0, 0.5, 0.5, 0.5, 0.5}).p_exact, 0.085415681168068267) < 1e-10);
}

TEST_CASE("ecp2 agrees with the longhand oracle") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> alpha(0.3, 3.0), coef(-1.0, 1.0);
  for (int i = 0; i < 25; ++i) {
    const double al = alpha(rng), b = coef(rng), g = coef(rng), d = coef(rng), e = coef(rng);
    const auto r = run_ecp2({al, b, g, d, e});
    const auto o = oracle::ecp2(al, b, g, d, e);
    CHECK(rel(r.p_exact, o.probability) < 1e-10);
    CHECK(rel(r.p_exact, r.p_formula) < 1e-9);
    CHECK(o.kept_terms == 4);
    CHECK(o.fidelity == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.final_fidelity == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("empty post-selected branch") {
  const auto r = run_ecp1({2.0, 0.0, 1.0});
  CHECK(r.p_exact == 0.0);
  CHECK(r.p_formula == 0.0);
  CHECK(r.final_state.empty());
  CHECK(r.final_fidelity == 0.0);
}

TEST_CASE("json report") {
  const auto r = run_ecp1({2.0, 0.6, 0.8});
  const auto doc = nlohmann::json::parse(report_to_json(r));
  CHECK(doc["library"] == "ecsim");
  CHECK(doc["protocol"] == "ecp1");
  CHECK(doc["parameters"]["beta"].get<double>() == 0.6);
  REQUIRE(doc["stages"].size() == 5);
  CHECK(doc["stages"][2]["name"] == "selected");
  CHECK(doc["stages"][2]["term_count"] == 4);
  CHECK(doc["p_exact"].get<double>() == r.p_exact);
  CHECK(doc["final_state"]["modes"].size() == 4);
  CHECK(doc["final_state"]["terms"][0]["amplitudes"].size() == 4);
  CHECK(doc["final_state"]["terms"][0]["coefficient"].size() == 2);
  CHECK(report_to_text(r).find("p_exact") != std::string::npos);
}
