#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ecsim/circuit.hpp"
#include "ecsim/errors.hpp"
#include "ecsim/optics.hpp"
#include "ecsim/protocols.hpp"
#include "ecsim/sweep.hpp"
#include "ecsim/validate.hpp"
#include "ecsim/version.hpp"

namespace py = pybind11;
using namespace ecsim;

namespace {

py::dict ecp1_columns(const std::vector<Ecp1Row>& rows) {
  std::vector<double> alpha, beta, gamma, pf, pe;
  for (const auto& r : rows) {
    alpha.push_back(r.alpha);
    beta.push_back(r.beta);
    gamma.push_back(r.gamma);
    pf.push_back(r.p_formula);
    pe.push_back(r.p_exact);
  }
  py::dict d;
  d["alpha"] = alpha;
  d["beta"] = beta;
  d["gamma"] = gamma;
  d["p_formula"] = pf;
  d["p_exact"] = pe;
  return d;
}

py::dict ecp2_columns(const std::vector<Ecp2Row>& rows) {
  std::vector<double> cols[10];
  for (const auto& r : rows) {
    const double v[10] = {r.alpha, r.theta1, r.theta2, r.theta3, r.beta, r.gamma, r.delta, r.eta, r.p_formula, r.p_exact};
    for (int i = 0; i < 10; ++i) cols[i].push_back(v[i]);
  }
  const char* names[10] = {"alpha", "theta1", "theta2", "theta3", "beta", "gamma", "delta", "eta", "p_formula", "p_exact"};
  py::dict d;
  for (int i = 0; i < 10; ++i) d[names[i]] = cols[i];
  return d;
}

SweepSpec make_spec(SweepSpec spec, std::optional<std::vector<double>> alpha, std::optional<std::size_t> steps,
                    std::optional<double> theta3, std::optional<double> gamma, unsigned jobs) {
  if (alpha) spec.alpha_values = *alpha;
  if (steps) spec.grid_steps = *steps;
  if (theta3) spec.theta3 = *theta3;
  if (gamma) {
    spec.gamma_convention = GammaConvention::explicit_;
    spec.gamma = *gamma;
  }
  spec.jobs = jobs;
  return spec;
}

}  // namespace

PYBIND11_MODULE(_ecsim, m) {
  m.doc() = "Exact coherent-state optics and entanglement concentration for cluster-type states.";
  m.attr("__version__") = kVersion;

  py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
  py::register_exception<DegenerateStateError>(m, "DegenerateStateError", PyExc_ArithmeticError);
  py::register_exception<DecoherenceError>(m, "DecoherenceError", PyExc_RuntimeError);
  py::register_exception<circuit::ParseError>(m, "ParseError", PyExc_SyntaxError);
  py::register_exception<circuit::CircuitRuntimeError>(m, "CircuitRuntimeError", PyExc_RuntimeError);

  py::class_<ToleranceConfig>(m, "ToleranceConfig")
      .def(py::init<>())
      .def(py::init([](double amp, double coeff) { return ToleranceConfig{amp, coeff}; }), py::arg("amp_merge_tol"),
           py::arg("coeff_zero_tol"))
      .def_readwrite("amp_merge_tol", &ToleranceConfig::amp_merge_tol)
      .def_readwrite("coeff_zero_tol", &ToleranceConfig::coeff_zero_tol);

  py::class_<CoherentSuperposition>(m, "CoherentSuperposition")
      .def(py::init([](std::vector<std::string> labels, std::vector<std::pair<Complex, std::vector<Complex>>> terms) {
             std::vector<BranchTerm> t;
             for (auto& [c, a] : terms) t.push_back({c, std::move(a)});
             return CoherentSuperposition(std::move(labels), std::move(t));
           }),
           py::arg("labels"), py::arg("terms") = std::vector<std::pair<Complex, std::vector<Complex>>>{},
           "labels: list of mode names; terms: list of (coefficient, [amplitude per mode])")
      .def_static("coherent", &CoherentSuperposition::coherent, py::arg("label"), py::arg("amplitude"))
      .def_static("vacuum", &CoherentSuperposition::vacuum, py::arg("label"))
      .def_property_readonly("labels", &CoherentSuperposition::labels)
      .def_property_readonly("terms",
                             [](const CoherentSuperposition& s) {
                               std::vector<std::pair<Complex, std::vector<Complex>>> out;
                               for (const auto& t : s.terms()) out.emplace_back(t.coefficient, t.amplitudes);
                               return out;
                             })
      .def_property_readonly("mode_count", &CoherentSuperposition::mode_count)
      .def_property_readonly("term_count", &CoherentSuperposition::term_count)
      .def("empty", &CoherentSuperposition::empty)
      .def("has_mode", &CoherentSuperposition::has_mode)
      .def("index_of", &CoherentSuperposition::index_of)
      .def("scaled", &CoherentSuperposition::scaled)
      .def("renamed", &CoherentSuperposition::renamed)
      .def("without_mode", &CoherentSuperposition::without_mode)
      .def("__len__", &CoherentSuperposition::term_count)
      .def("__repr__", [](const CoherentSuperposition& s) {
        std::string modes;
        for (const auto& l : s.labels()) modes += (modes.empty() ? "" : ",") + l;
        return "<CoherentSuperposition modes=[" + modes + "] terms=" + std::to_string(s.term_count()) + ">";
      });

  m.def("mode_overlap", &mode_overlap, py::arg("u"), py::arg("v"));
  m.def("inner_product", &inner_product, py::arg("lhs"), py::arg("rhs"));
  m.def("norm_squared", &norm_squared, py::arg("state"));
  m.def("normalize", &normalize, py::arg("state"), py::arg("tol") = ToleranceConfig{});
  m.def("canonicalize", &ecsim::canonicalize, py::arg("state"), py::arg("tol") = ToleranceConfig{});
  m.def("tensor_product", &tensor_product, py::arg("lhs"), py::arg("rhs"), py::arg("tol") = ToleranceConfig{});
  m.def("fidelity", &fidelity, py::arg("state"), py::arg("target"));

  m.def(
      "beam_splitter",
      [](const CoherentSuperposition& s, const std::string& i, const std::string& j, std::optional<std::string> oi,
         std::optional<std::string> oj, const ToleranceConfig& tol) {
        if (oi || oj) return beam_splitter(s, i, j, oi.value_or(i), oj.value_or(j), tol);
        return beam_splitter(s, i, j, tol);
      },
      py::arg("state"), py::arg("mode_i"), py::arg("mode_j"), py::arg("out_i") = py::none(),
      py::arg("out_j") = py::none(), py::arg("tol") = ToleranceConfig{});
  m.def("beam_splitter_with_vacuum", &beam_splitter_with_vacuum, py::arg("state"), py::arg("mode"),
        py::arg("new_label_1"), py::arg("new_label_2"), py::arg("tol") = ToleranceConfig{});
  m.def("swap_modes", &swap_modes, py::arg("state"), py::arg("mode_i"), py::arg("mode_j"));
  m.def(
      "select_vacuum_branch",
      [](const CoherentSuperposition& s, const std::vector<std::string>& modes, const ToleranceConfig& tol) {
        auto r = select_vacuum_branch(s, modes, tol);
        return py::make_tuple(r.state, r.probability);
      },
      py::arg("state"), py::arg("modes"), py::arg("tol") = ToleranceConfig{}, "Returns (kept_branch, probability).");
  m.def(
      "project_vacuum",
      [](const CoherentSuperposition& s, const std::string& mode, const ToleranceConfig& tol) {
        auto r = project_vacuum(s, mode, tol);
        return py::make_tuple(r.state, r.probability);
      },
      py::arg("state"), py::arg("mode"), py::arg("tol") = ToleranceConfig{}, "Returns (projected_state, probability).");
  m.def("discard_correlated_mode", &discard_correlated_mode, py::arg("state"), py::arg("mode"),
        py::arg("tol") = ToleranceConfig{});

  py::class_<Ecp1Params>(m, "Ecp1Params")
      .def(py::init([](double a, double b, double g) { return Ecp1Params{a, b, g}; }), py::arg("alpha"),
           py::arg("beta"), py::arg("gamma"))
      .def_readwrite("alpha", &Ecp1Params::alpha)
      .def_readwrite("beta", &Ecp1Params::beta)
      .def_readwrite("gamma", &Ecp1Params::gamma);
  py::class_<Ecp2Params>(m, "Ecp2Params")
      .def(py::init([](double a, double b, double g, double d, double e) { return Ecp2Params{a, b, g, d, e}; }),
           py::arg("alpha"), py::arg("beta"), py::arg("gamma"), py::arg("delta"), py::arg("eta"))
      .def_static(
          "from_theta",
          [](double alpha, double t1, double t2, double t3) { return ecp2_from_theta(alpha, {t1, t2, t3}); },
          py::arg("alpha"), py::arg("theta1"), py::arg("theta2"), py::arg("theta3"))
      .def_readwrite("alpha", &Ecp2Params::alpha)
      .def_readwrite("beta", &Ecp2Params::beta)
      .def_readwrite("gamma", &Ecp2Params::gamma)
      .def_readwrite("delta", &Ecp2Params::delta)
      .def_readwrite("eta", &Ecp2Params::eta);

  m.def("n1", &n1);
  m.def("n2", &n2);
  m.def("n3", &n3);
  m.def("n4", &n4);
  m.def("n5", &n5);
  m.def("formula_p_ecp1", &formula_p_ecp1);
  m.def("formula_p_ecp2", &formula_p_ecp2);
  m.def("cluster_pattern", &cluster_pattern, py::arg("alpha"), py::arg("modes") = kClusterModes);

  py::class_<StageRecord>(m, "StageRecord")
      .def_readonly("name", &StageRecord::name)
      .def_readonly("state", &StageRecord::state)
      .def_readonly("norm_squared", &StageRecord::norm_squared)
      .def_property_readonly("term_count", &StageRecord::term_count)
      .def_property_readonly("modes", &StageRecord::modes);

  py::class_<ProtocolReport>(m, "ProtocolReport")
      .def_readonly("protocol", &ProtocolReport::protocol)
      .def_readonly("parameters", &ProtocolReport::parameters)
      .def_readonly("stages", &ProtocolReport::stages)
      .def_readonly("p_exact", &ProtocolReport::p_exact)
      .def_readonly("p_formula", &ProtocolReport::p_formula)
      .def_readonly("final_fidelity", &ProtocolReport::final_fidelity)
      .def_readonly("final_state", &ProtocolReport::final_state)
      .def("stage", &ProtocolReport::stage, py::return_value_policy::reference_internal)
      .def("term_counts", &ProtocolReport::term_counts)
      .def("to_json", &report_to_json, py::arg("indent") = 2)
      .def("__str__", &report_to_text);

  m.def("run_ecp1", &run_ecp1, py::arg("params"), py::arg("tol") = ToleranceConfig{});
  m.def("run_ecp2", &run_ecp2, py::arg("params"), py::arg("tol") = ToleranceConfig{});

  m.def(
      "sweep_ecp1",
      [](std::optional<std::vector<double>> alpha, std::optional<std::size_t> steps, std::optional<double> gamma,
         unsigned jobs) {
        return ecp1_columns(sweep_ecp1(make_spec(default_ecp1_sweep(), alpha, steps, std::nullopt, gamma, jobs)));
      },
      py::arg("alpha") = py::none(), py::arg("steps") = py::none(), py::arg("gamma") = py::none(),
      py::arg("jobs") = 1u, "Column dict: alpha, beta, gamma, p_formula, p_exact.");
  m.def(
      "sweep_ecp2",
      [](std::optional<std::vector<double>> alpha, std::optional<std::size_t> steps, std::optional<double> theta3,
         unsigned jobs) {
        return ecp2_columns(sweep_ecp2(make_spec(default_ecp2_sweep(), alpha, steps, theta3, std::nullopt, jobs)));
      },
      py::arg("alpha") = py::none(), py::arg("steps") = py::none(), py::arg("theta3") = py::none(),
      py::arg("jobs") = 1u);

  py::class_<CheckResult>(m, "CheckResult")
      .def_readonly("name", &CheckResult::name)
      .def_readonly("passed", &CheckResult::passed)
      .def_readonly("max_deviation", &CheckResult::max_deviation)
      .def_readonly("tolerance", &CheckResult::tolerance)
      .def_readonly("detail", &CheckResult::detail);
  m.def(
      "validate",
      [](std::uint64_t seed, int draws, bool inject_n3_fault) {
        return run_validation(
            {seed, draws, inject_n3_fault ? InjectedFault::n3_sign_flip : InjectedFault::none});
      },
      py::arg("seed") = 42, py::arg("draws") = 100, py::arg("inject_n3_fault") = false);

  py::class_<circuit::CircuitProgram>(m, "CircuitProgram")
      .def_readonly("alpha", &circuit::CircuitProgram::alpha)
      .def_readonly("source_name", &circuit::CircuitProgram::source_name)
      .def_property_readonly("statement_count",
                             [](const circuit::CircuitProgram& p) { return p.statements.size(); })
      .def("format", &circuit::format_program)
      .def("structurally_equal", &circuit::structurally_equal);

  py::class_<circuit::ReportSnapshot>(m, "ReportSnapshot")
      .def_readonly("line", &circuit::ReportSnapshot::line)
      .def_readonly("term_count", &circuit::ReportSnapshot::term_count)
      .def_readonly("norm_squared", &circuit::ReportSnapshot::norm_squared)
      .def_readonly("probability", &circuit::ReportSnapshot::probability)
      .def_readonly("fidelity", &circuit::ReportSnapshot::fidelity)
      .def_readonly("modes", &circuit::ReportSnapshot::modes);

  py::class_<circuit::ExecutionReport>(m, "ExecutionReport")
      .def_readonly("snapshots", &circuit::ExecutionReport::snapshots)
      .def_readonly("final_state", &circuit::ExecutionReport::final_state)
      .def_readonly("probability", &circuit::ExecutionReport::probability)
      .def_property_readonly("ok", &circuit::ExecutionReport::ok)
      .def_property_readonly("failure_line",
                             [](const circuit::ExecutionReport& r) -> std::optional<int> {
                               if (r.failure) return r.failure->line;
                               return std::nullopt;
                             })
      .def("__str__", &circuit::execution_report_to_text);

  m.def("parse_circuit", &circuit::parse_circuit, py::arg("source"), py::arg("source_name") = "<input>");
  m.def("execute_circuit", &circuit::execute_circuit, py::arg("program"), py::arg("tol") = ToleranceConfig{});
}
