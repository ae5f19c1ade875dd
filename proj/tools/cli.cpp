#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>

#include "ecsim/circuit.hpp"
#include "ecsim/errors.hpp"
#include "ecsim/protocols.hpp"
#include "ecsim/sweep.hpp"
#include "ecsim/validate.hpp"

namespace ecsim::cli {

namespace {

struct RunOptions {
  std::string protocol;
  double alpha = 2.0;
  std::optional<double> beta, gamma, delta, eta;
  double theta1 = std::numbers::pi / 4.0;
  double theta2 = std::numbers::pi / 4.0;
  double theta3 = std::numbers::pi / 6.0;
  bool json = false;
};

struct SweepOptions {
  std::vector<double> alpha;
  std::size_t steps = 0;
  double theta3 = std::numbers::pi / 6.0;
  std::optional<double> gamma;
  std::string out = "-";
  unsigned jobs = 1;
};

int cmd_run(const RunOptions& o, std::ostream& out, std::ostream& err) {
  ProtocolReport report;
  try {
    if (o.protocol == "ecp1") {
      if (!o.beta) {
        err << "run ecp1: --beta is required\n";
        return kUsage;
      }
      double gamma = 0.0;
      if (o.gamma) {
        gamma = *o.gamma;
      } else if (std::abs(*o.beta) <= 1.0) {
        gamma = std::sqrt(1.0 - *o.beta * *o.beta);
      } else {
        err << "degenerate parameters: |beta| > 1 and no --gamma given\n";
        return kDegenerate;
      }
      report = run_ecp1({o.alpha, *o.beta, gamma});
    } else {
      Ecp2Params q;
      if (o.beta || o.gamma || o.delta || o.eta) {
        q = {o.alpha, o.beta.value_or(0.0), o.gamma.value_or(0.0), o.delta.value_or(0.0), o.eta.value_or(0.0)};
      } else {
        q = ecp2_from_theta(o.alpha, {o.theta1, o.theta2, o.theta3});
      }
      report = run_ecp2(q);
    }
  } catch (const DegenerateStateError& e) {
    err << "degenerate parameters: " << e.what() << '\n';
    return kDegenerate;
  } catch (const std::invalid_argument& e) {
    err << "degenerate parameters: " << e.what() << '\n';
    return kDegenerate;
  }
  out << (o.json ? report_to_json(report) + "\n" : report_to_text(report));
  if (report.final_state.empty()) {
    err << "degenerate parameters: the post-selected branch is empty (success probability 0)\n";
    return kDegenerate;
  }
  return kOk;
}

template <typename Rows, typename Writer>
int emit_csv(const Rows& rows, Writer write, const std::string& path, std::ostream& out, std::ostream& err) {
  if (path == "-") {
    write(out, rows);
    return kOk;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "cannot open '" << path << "' for writing\n";
    return kIoError;
  }
  write(file, rows);
  file.flush();
  if (!file) {
    err << "write to '" << path << "' failed\n";
    return kIoError;
  }
  return kOk;
}

int cmd_sweep(bool ecp2, const SweepOptions& o, std::ostream& out, std::ostream& err) {
  SweepSpec spec = ecp2 ? default_ecp2_sweep() : default_ecp1_sweep();
  if (!o.alpha.empty()) spec.alpha_values = o.alpha;
  if (o.steps != 0) spec.grid_steps = o.steps;
  spec.theta3 = o.theta3;
  spec.jobs = o.jobs;
  if (o.gamma) {
    spec.gamma_convention = GammaConvention::explicit_;
    spec.gamma = *o.gamma;
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    err << e.what() << '\n';
    return kUsage;
  }
  if (ecp2) {
    const auto rows = sweep_ecp2(spec);
    err << "# sweep-ecp2 rows=" << rows.size() << " theta3=" << csv_number(spec.theta3) << '\n';
    return emit_csv(rows, write_ecp2_csv, o.out, out, err);
  }
  const auto rows = sweep_ecp1(spec);
  err << "# sweep-ecp1 rows=" << rows.size() << " gamma_convention="
      << (spec.gamma_convention == GammaConvention::derived ? "derived (gamma = sqrt(1 - beta^2))" : "explicit")
      << '\n';
  return emit_csv(rows, write_ecp1_csv, o.out, out, err);
}

int cmd_validate(const ValidationOptions& options, std::ostream& out) {
  const auto results = run_validation(options);
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    out << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(72) << r.name << std::right
        << " max_dev=" << std::scientific << std::setprecision(3) << r.max_deviation << " tol=" << r.tolerance
        << std::defaultfloat;
    if (!r.detail.empty()) out << "  (" << r.detail << ')';
    out << '\n';
  }
  if (!all) {
    out << "failing checks:";
    for (const auto& r : results) {
      if (!r.passed) out << "\n  " << r.name;
    }
    out << '\n';
  }
  return all ? kOk : kValidationFailed;
}

int cmd_exec(const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    err << "cannot open circuit file '" << path << "'\n";
    return kMissingFile;
  }
  std::stringstream buffer;
  buffer << file.rdbuf();
  try {
    const auto program = circuit::parse_circuit(buffer.str(), path);
    const auto report = circuit::execute_circuit(program);
    out << circuit::execution_report_to_text(report);
    return report.ok() ? kOk : kAssertionFailed;
  } catch (const circuit::ParseError& e) {
    err << e.what() << '\n';
    return kParseError;
  } catch (const circuit::CircuitRuntimeError& e) {
    err << path << ':' << e.line() << ": " << e.message() << '\n';
    return e.kind() == circuit::RuntimeErrorKind::degenerate ? kDegenerate : kParseError;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact coherent-state linear-optics simulator for cluster-type entanglement concentration", "ecsim"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "run one concentration protocol and print its report");
  run_cmd->add_option("protocol", run_opts.protocol, "ecp1 or ecp2")->required()->check(CLI::IsMember({"ecp1", "ecp2"}));
  run_cmd->add_option("--alpha", run_opts.alpha, "coherent amplitude")->capture_default_str();
  run_cmd->add_option("--beta", run_opts.beta);
  run_cmd->add_option("--gamma", run_opts.gamma, "ecp1 default: sqrt(1 - beta^2)");
  run_cmd->add_option("--delta", run_opts.delta);
  run_cmd->add_option("--eta", run_opts.eta);
  run_cmd->add_option("--theta1", run_opts.theta1, "ecp2 angle (radians)")->capture_default_str();
  run_cmd->add_option("--theta2", run_opts.theta2, "ecp2 angle (radians)")->capture_default_str();
  run_cmd->add_option("--theta3", run_opts.theta3, "ecp2 angle (radians)")->capture_default_str();
  run_cmd->add_flag("--json", run_opts.json, "print the report as JSON");

  SweepOptions sweep1_opts;
  auto* sweep1 = app.add_subcommand("sweep-ecp1", "ecp1 success probability over beta in [0, 1] (CSV)");
  sweep1->add_option("--alpha", sweep1_opts.alpha, "comma-separated alpha values (default 0.5,1,2)")->delimiter(',');
  sweep1->add_option("--steps", sweep1_opts.steps, "beta grid points (default 201)");
  sweep1->add_option("--gamma", sweep1_opts.gamma, "fixed gamma instead of sqrt(1 - beta^2)");
  sweep1->add_option("--out", sweep1_opts.out, "output path, - for stdout")->capture_default_str();
  sweep1->add_option("--jobs", sweep1_opts.jobs, "worker threads")->capture_default_str();

  SweepOptions sweep2_opts;
  auto* sweep2 = app.add_subcommand("sweep-ecp2", "ecp2 success probability over (theta1, theta2) in [0, pi/2]^2 (CSV)");
  sweep2->add_option("--alpha", sweep2_opts.alpha, "comma-separated alpha values (default 2)")->delimiter(',');
  sweep2->add_option("--steps", sweep2_opts.steps, "grid points per angle (default 101)");
  sweep2->add_option("--theta3", sweep2_opts.theta3, "fixed theta3 (radians)")->capture_default_str();
  sweep2->add_option("--out", sweep2_opts.out, "output path, - for stdout")->capture_default_str();
  sweep2->add_option("--jobs", sweep2_opts.jobs, "worker threads")->capture_default_str();

  ValidationOptions validate_opts;
  std::string fault = "none";
  auto* validate = app.add_subcommand("validate", "check closed forms and engine invariants against each other");
  validate->add_option("--seed", validate_opts.seed)->capture_default_str();
  validate->add_option("--draws", validate_opts.draws)->capture_default_str()->check(CLI::PositiveNumber);
  validate->add_option("--inject-fault", fault, "testing aid: none or n3-sign")
      ->check(CLI::IsMember({"none", "n3-sign"}))
      ->capture_default_str();

  std::string circuit_path;
  auto* exec = app.add_subcommand("exec", "parse and execute a .circ program");
  exec->add_option("path", circuit_path)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n";
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kUsage;
  }

  if (run_cmd->parsed()) return cmd_run(run_opts, out, err);
  if (sweep1->parsed()) return cmd_sweep(false, sweep1_opts, out, err);
  if (sweep2->parsed()) return cmd_sweep(true, sweep2_opts, out, err);
  if (validate->parsed()) {
    validate_opts.fault = fault == "n3-sign" ? InjectedFault::n3_sign_flip : InjectedFault::none;
    return cmd_validate(validate_opts, out);
  }
  return cmd_exec(circuit_path, out, err);
}

}  // namespace ecsim::cli
