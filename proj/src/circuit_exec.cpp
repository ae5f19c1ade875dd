#include <iomanip>
#include <sstream>

#include "ecsim/circuit.hpp"
#include "ecsim/errors.hpp"
#include "ecsim/optics.hpp"
#include "ecsim/protocols.hpp"

namespace ecsim::circuit {

CircuitRuntimeError::CircuitRuntimeError(int line, RuntimeErrorKind kind, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line), kind_(kind), message_(message) {}

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

class Executor {
 public:
  Executor(const CircuitProgram& program, const ToleranceConfig& tol) : program_(program), tol_(tol) {}

  ExecutionReport run() {
    for (const auto& s : program_.statements) {
      if (!std::holds_alternative<Term>(s.body)) close_term_block();
      try {
        step(s);
      } catch (const ShapeError& e) {
        throw CircuitRuntimeError(s.line, RuntimeErrorKind::shape, e.what());
      } catch (const DegenerateStateError& e) {
        throw CircuitRuntimeError(s.line, RuntimeErrorKind::degenerate, e.what());
      } catch (const DecoherenceError& e) {
        throw CircuitRuntimeError(s.line, RuntimeErrorKind::decoherence, e.what());
      } catch (const std::invalid_argument& e) {
        throw CircuitRuntimeError(s.line, RuntimeErrorKind::invalid_argument, e.what());
      }
      if (report_.failure) break;
      report_.stages.push_back({s.line, format_statement(s.body), state_.term_count(), norm_squared(state_),
                                state_.labels()});
    }
    report_.final_state = state_;
    return std::move(report_);
  }

 private:
  double alpha() const {
    if (!program_.alpha) throw std::invalid_argument("alpha is not set");
    return *program_.alpha;
  }

  void attach(const CoherentSuperposition& part) {
    state_ = prepared_ ? tensor_product(state_, part, tol_) : part;
    prepared_ = true;
  }

  void close_term_block() {
    block_labels_.clear();
    block_terms_.clear();
  }

  void add_term(const Term& t) {
    if (block_terms_.empty()) {
      block_labels_ = current_modes_;
      block_base_ = state_;
      block_base_prepared_ = prepared_;
    }
    BranchTerm term{Complex(t.coeff_re, t.coeff_im), {}};
    for (const auto& m : t.multipliers) term.amplitudes.emplace_back(m.value() * alpha());
    block_terms_.push_back(std::move(term));
    state_ = block_base_;
    prepared_ = block_base_prepared_;
    attach(canonicalize(CoherentSuperposition(block_labels_, block_terms_), tol_));
  }

  void select(std::span<const std::string> modes) {
    auto outcome = select_vacuum_branch(state_, modes, tol_);
    report_.probability *= outcome.probability;
    state_ = std::move(outcome.state);
  }

  void step(const Statement& s) {
    std::visit(
        Overloaded{
            [&](const DeclareModes& d) { current_modes_ = d.labels; },
            [&](const Term& t) { add_term(t); },
            [&](const PrepareEcp1Input& p) {
              attach(build_partial_ecp1({alpha(), p.beta, p.gamma}, p.modes));
            },
            [&](const PrepareEcp1Ancilla& p) {
              attach(build_ancilla_single({alpha(), p.beta, p.gamma}, p.mode));
            },
            [&](const PrepareEcp2Input& p) {
              attach(build_partial_ecp2({alpha(), p.beta, p.gamma, p.delta, p.eta}, p.modes));
            },
            [&](const PrepareEcp2TwoMode& p) {
              attach(build_ancilla_two_mode({alpha(), p.beta, p.gamma, p.delta, p.eta}, p.modes));
            },
            [&](const PrepareEcp2G& p) {
              attach(build_ancilla_g({alpha(), p.beta, p.gamma, p.delta, p.eta}, p.mode));
            },
            [&](const Bs& b) { state_ = beam_splitter(state_, b.in_i, b.in_j, b.out_i, b.out_j, tol_); },
            [&](const BsVac& b) { state_ = beam_splitter_with_vacuum(state_, b.in, b.out_1, b.out_2, tol_); },
            [&](const Swap& w) { state_ = swap_modes(state_, w.mode_i, w.mode_j); },
            [&](const SelectVac& v) { select(v.modes); },
            [&](const ProjVac& v) {
              auto outcome = project_vacuum(state_, v.mode, tol_);
              report_.probability *= outcome.probability;
              state_ = std::move(outcome.state);
            },
            [&](const Discard& d) { state_ = discard_correlated_mode(state_, d.mode, tol_); },
            [&](const Normalize&) { state_ = normalize(state_, tol_); },
            [&](const AssertTerms& a) {
              const bool ok = state_.term_count() == a.count;
              AssertionResult r{s.line, ok,
                                "assert_terms " + std::to_string(a.count) + ": state has " +
                                    std::to_string(state_.term_count()) + " terms"};
              record_assertion(std::move(r));
            },
            [&](const AssertProbGe& a) {
              const bool ok = report_.probability >= a.threshold;
              std::ostringstream msg;
              msg << std::setprecision(17) << format_statement(a) << ": probability is " << report_.probability;
              record_assertion({s.line, ok, msg.str()});
            },
            [&](const Report& r) { snapshot(s.line, r.target); },
        },
        s.body);
  }

  void record_assertion(AssertionResult r) {
    report_.assertions.push_back(r);
    if (!r.passed) report_.failure = std::move(r);
  }

  void snapshot(int line, ReportTarget target) {
    ReportSnapshot snap;
    snap.line = line;
    snap.term_count = state_.term_count();
    snap.norm_squared = norm_squared(state_);
    snap.probability = report_.probability;
    snap.modes = state_.labels();
    if (target != ReportTarget::none) {
      if (state_.mode_count() != 4) {
        throw ShapeError("report target needs exactly 4 modes, state has " + std::to_string(state_.mode_count()));
      }
      const auto& l = state_.labels();
      snap.fidelity = state_.empty() ? 0.0 : fidelity(state_, cluster_pattern(alpha(), {l[0], l[1], l[2], l[3]}));
    }
    report_.snapshots.push_back(std::move(snap));
  }

  const CircuitProgram& program_;
  ToleranceConfig tol_;
  ExecutionReport report_;
  CoherentSuperposition state_;
  bool prepared_ = false;
  std::vector<std::string> current_modes_;
  std::vector<std::string> block_labels_;
  std::vector<BranchTerm> block_terms_;
  CoherentSuperposition block_base_;
  bool block_base_prepared_ = false;
};

}  // namespace

ExecutionReport execute_circuit(const CircuitProgram& program, const ToleranceConfig& tol) {
  return Executor(program, tol).run();
}

std::string execution_report_to_text(const ExecutionReport& report) {
  std::ostringstream out;
  out << std::setprecision(12);
  for (const auto& s : report.stages) {
    out << std::setw(4) << s.line << "  " << std::left << std::setw(48) << s.statement << std::right
        << " terms=" << s.term_count << " norm2=" << s.norm_squared << '\n';
  }
  for (const auto& snap : report.snapshots) {
    out << "report (line " << snap.line << "): terms=" << snap.term_count << " norm2=" << snap.norm_squared
        << " probability=" << snap.probability;
    if (snap.fidelity) out << " fidelity=" << *snap.fidelity;
    out << " modes=";
    for (std::size_t i = 0; i < snap.modes.size(); ++i) out << (i ? "," : "") << snap.modes[i];
    out << '\n';
  }
  out << "probability " << report.probability << '\n';
  if (report.failure) out << "assertion failed at line " << report.failure->line << ": " << report.failure->message << '\n';
  return out.str();
}

}  // namespace ecsim::circuit
