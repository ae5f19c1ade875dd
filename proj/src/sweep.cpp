#include "ecsim/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "ecsim/errors.hpp"
#include "ecsim/protocols.hpp"

namespace ecsim {

namespace {

// Fills out[i] = fn(i) for every index, split over `jobs` threads.
template <typename Row, typename Fn>
void parallel_fill(std::vector<Row>& out, unsigned jobs, Fn fn) {
  const std::size_t n = out.size();
  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) out[i] = fn(i);
    });
  }
}

double grid_point(std::size_t i, std::size_t steps, double hi) {
  if (i + 1 == steps) return hi;
  return hi * static_cast<double>(i) / static_cast<double>(steps - 1);
}

// A parameter point whose ancilla cannot be prepared has no success event.
template <typename Fn>
double probability_or_zero(Fn fn) {
  try {
    return fn();
  } catch (const DegenerateStateError&) {
    return 0.0;
  }
}

}  // namespace

void SweepSpec::validate() const {
  if (alpha_values.empty()) throw std::invalid_argument("at least one alpha value is required");
  for (double a : alpha_values) {
    if (!std::isfinite(a) || !(a > 0.0)) throw std::invalid_argument("alpha values must be finite and > 0");
  }
  if (grid_steps < 2) throw std::invalid_argument("grid_steps must be >= 2");
  if (jobs == 0) throw std::invalid_argument("jobs must be >= 1");
  if (!std::isfinite(theta3)) throw std::invalid_argument("theta3 must be finite");
  if (!std::isfinite(gamma)) throw std::invalid_argument("gamma must be finite");
}

SweepSpec default_ecp1_sweep() {
  SweepSpec s;
  s.alpha_values = {0.5, 1.0, 2.0};
  s.grid_steps = 201;
  return s;
}

SweepSpec default_ecp2_sweep() {
  SweepSpec s;
  s.alpha_values = {2.0};
  s.grid_steps = 101;
  s.theta3 = std::numbers::pi / 6.0;
  return s;
}

std::vector<Ecp1Row> sweep_ecp1(const SweepSpec& spec) {
  spec.validate();
  const std::size_t n = spec.grid_steps;
  std::vector<Ecp1Row> rows(spec.alpha_values.size() * n);
  parallel_fill(rows, spec.jobs, [&](std::size_t idx) {
    const double alpha = spec.alpha_values[idx / n];
    const double beta = grid_point(idx % n, n, 1.0);
    const double gamma =
        spec.gamma_convention == GammaConvention::derived ? std::sqrt(std::max(0.0, 1.0 - beta * beta)) : spec.gamma;
    const Ecp1Params p{alpha, beta, gamma};
    return Ecp1Row{alpha, beta, gamma, probability_or_zero([&] { return formula_p_ecp1(p); }),
                   probability_or_zero([&] { return run_ecp1(p).p_exact; })};
  });
  return rows;
}

std::vector<Ecp2Row> sweep_ecp2(const SweepSpec& spec) {
  spec.validate();
  const std::size_t n = spec.grid_steps;
  const double quarter = std::numbers::pi / 2.0;
  std::vector<Ecp2Row> rows(spec.alpha_values.size() * n * n);
  parallel_fill(rows, spec.jobs, [&](std::size_t idx) {
    const double alpha = spec.alpha_values[idx / (n * n)];
    const double theta1 = grid_point((idx / n) % n, n, quarter);
    const double theta2 = grid_point(idx % n, n, quarter);
    const auto q = ecp2_from_theta(alpha, {theta1, theta2, spec.theta3});
    return Ecp2Row{alpha,  theta1, theta2, spec.theta3, q.beta, q.gamma, q.delta, q.eta,
                   probability_or_zero([&] { return formula_p_ecp2(q); }),
                   probability_or_zero([&] { return run_ecp2(q).p_exact; })};
  });
  return rows;
}

std::string csv_number(double v) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

void write_ecp1_csv(std::ostream& out, const std::vector<Ecp1Row>& rows) {
  out << "alpha,beta,gamma,p_formula,p_exact\n";
  for (const auto& r : rows) {
    out << csv_number(r.alpha) << ',' << csv_number(r.beta) << ',' << csv_number(r.gamma) << ','
        << csv_number(r.p_formula) << ',' << csv_number(r.p_exact) << '\n';
  }
}

void write_ecp2_csv(std::ostream& out, const std::vector<Ecp2Row>& rows) {
  out << "alpha,theta1,theta2,theta3,beta,gamma,delta,eta,p_formula,p_exact\n";
  for (const auto& r : rows) {
    out << csv_number(r.alpha) << ',' << csv_number(r.theta1) << ',' << csv_number(r.theta2) << ','
        << csv_number(r.theta3) << ',' << csv_number(r.beta) << ',' << csv_number(r.gamma) << ','
        << csv_number(r.delta) << ',' << csv_number(r.eta) << ',' << csv_number(r.p_formula) << ','
        << csv_number(r.p_exact) << '\n';
  }
}

}  // namespace ecsim
