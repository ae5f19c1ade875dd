#pragma once

// Line-oriented circuit language (.circ) for coherent-state optics.
//
//   alpha 2.0
//   modes a b c d e
//   prep_ecp1_input 0.7071067811865476 0.7071067811865476 on a b c d
//   prep_ecp1_anc 0.7071067811865476 0.7071067811865476 on e
//   bs d e -> d1 e1
//   selectvac d1
//   bsvac e1 -> e2 e3
//   discard e3
//   report ecp1
//
// One statement per line, `#` starts a comment. Modes must be declared with
// `modes` before they are prepared (by a prep_* statement or a block of
// consecutive `term` lines over the most recent `modes` list), and must be
// prepared before any optical element touches them. Elements that rename
// modes (bs, bsvac) declare their outputs; consumed labels cannot be reused.

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ecsim/coherent.hpp"

namespace ecsim::circuit {

/// Amplitude multiplier in units of alpha: a decimal literal or +-sqrt2.
struct Multiplier {
  double factor = 0.0;  // +-1 when sqrt2 is set
  bool sqrt2 = false;

  double value() const noexcept;
  bool operator==(const Multiplier&) const = default;
};

struct DeclareModes {
  std::vector<std::string> labels;
  bool operator==(const DeclareModes&) const = default;
};
struct Term {
  double coeff_re = 0.0;
  double coeff_im = 0.0;
  std::vector<Multiplier> multipliers;
  bool operator==(const Term&) const = default;
};
struct PrepareEcp1Input {
  double beta = 0.0, gamma = 0.0;
  std::array<std::string, 4> modes;
  bool operator==(const PrepareEcp1Input&) const = default;
};
struct PrepareEcp1Ancilla {
  double beta = 0.0, gamma = 0.0;
  std::string mode;
  bool operator==(const PrepareEcp1Ancilla&) const = default;
};
struct PrepareEcp2Input {
  double beta = 0.0, gamma = 0.0, delta = 0.0, eta = 0.0;
  std::array<std::string, 4> modes;
  bool operator==(const PrepareEcp2Input&) const = default;
};
struct PrepareEcp2TwoMode {
  double beta = 0.0, gamma = 0.0, delta = 0.0, eta = 0.0;
  std::array<std::string, 2> modes;
  bool operator==(const PrepareEcp2TwoMode&) const = default;
};
struct PrepareEcp2G {
  double beta = 0.0, gamma = 0.0, delta = 0.0, eta = 0.0;
  std::string mode;
  bool operator==(const PrepareEcp2G&) const = default;
};
struct Bs {
  std::string in_i, in_j, out_i, out_j;
  bool operator==(const Bs&) const = default;
};
struct BsVac {
  std::string in, out_1, out_2;
  bool operator==(const BsVac&) const = default;
};
struct Swap {
  std::string mode_i, mode_j;
  bool operator==(const Swap&) const = default;
};
struct SelectVac {
  std::vector<std::string> modes;
  bool operator==(const SelectVac&) const = default;
};
struct ProjVac {
  std::string mode;
  bool operator==(const ProjVac&) const = default;
};
struct Discard {
  std::string mode;
  bool operator==(const Discard&) const = default;
};
struct Normalize {
  bool operator==(const Normalize&) const = default;
};
struct AssertTerms {
  std::size_t count = 0;
  bool operator==(const AssertTerms&) const = default;
};
struct AssertProbGe {
  double threshold = 0.0;
  bool operator==(const AssertProbGe&) const = default;
};

enum class ReportTarget { none, ecp1, ecp2 };

struct Report {
  ReportTarget target = ReportTarget::none;
  bool operator==(const Report&) const = default;
};

using StatementBody =
    std::variant<DeclareModes, Term, PrepareEcp1Input, PrepareEcp1Ancilla, PrepareEcp2Input, PrepareEcp2TwoMode,
                 PrepareEcp2G, Bs, BsVac, Swap, SelectVac, ProjVac, Discard, Normalize, AssertTerms, AssertProbGe,
                 Report>;

struct Statement {
  StatementBody body;
  int line = 0;
};

struct CircuitProgram {
  std::optional<double> alpha;
  std::vector<Statement> statements;
  std::string source_name;
};

/// Same alpha and statement bodies; line numbers and source name are ignored.
bool structurally_equal(const CircuitProgram& a, const CircuitProgram& b);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source_name, int line, int column, std::string message, std::string token);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }
  const std::string& token() const noexcept { return token_; }

 private:
  int line_;
  int column_;
  std::string message_;
  std::string token_;
};

/// Parses a whole program; throws the first ParseError encountered.
CircuitProgram parse_circuit(std::string_view source, std::string source_name = "<input>");

/// Canonical text; parse_circuit(format_program(p)) is structurally equal to p.
std::string format_program(const CircuitProgram& program);
std::string format_statement(const StatementBody& statement);

// ---------------------------------------------------------------------------
// Execution

enum class RuntimeErrorKind { shape, degenerate, decoherence, invalid_argument };

/// A library error raised while executing a statement, tagged with its line.
class CircuitRuntimeError : public std::runtime_error {
 public:
  CircuitRuntimeError(int line, RuntimeErrorKind kind, const std::string& message);

  int line() const noexcept { return line_; }
  RuntimeErrorKind kind() const noexcept { return kind_; }
  const std::string& message() const noexcept { return message_; }

 private:
  int line_;
  RuntimeErrorKind kind_;
  std::string message_;
};

struct ExecutedStage {
  int line = 0;
  std::string statement;
  std::size_t term_count = 0;
  double norm_squared = 0.0;
  std::vector<std::string> modes;
};

struct AssertionResult {
  int line = 0;
  bool passed = false;
  std::string message;
};

struct ReportSnapshot {
  int line = 0;
  std::size_t term_count = 0;
  double norm_squared = 0.0;
  double probability = 0.0;
  std::optional<double> fidelity;
  std::vector<std::string> modes;
};

struct ExecutionReport {
  std::vector<ExecutedStage> stages;
  std::vector<AssertionResult> assertions;
  std::vector<ReportSnapshot> snapshots;
  CoherentSuperposition final_state;
  /// Product of the post-selection probabilities encountered so far.
  double probability = 1.0;
  /// Set when an assert_* statement failed; execution stopped there.
  std::optional<AssertionResult> failure;

  bool ok() const noexcept { return !failure.has_value(); }
};

/// Runs the statements in order on one evolving state. Library errors are
/// rethrown as CircuitRuntimeError carrying the statement's line.
ExecutionReport execute_circuit(const CircuitProgram& program, const ToleranceConfig& tol = {});

std::string execution_report_to_text(const ExecutionReport& report);

}  // namespace ecsim::circuit
