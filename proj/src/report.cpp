#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "ecsim/protocols.hpp"
#include "ecsim/version.hpp"

namespace ecsim {

namespace {

using json = nlohmann::ordered_json;

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json state_json(const CoherentSuperposition& s) {
  json terms = json::array();
  for (const auto& t : s.terms()) {
    json amps = json::array();
    for (const auto& a : t.amplitudes) amps.push_back(complex_json(a));
    terms.push_back({{"coefficient", complex_json(t.coefficient)}, {"amplitudes", std::move(amps)}});
  }
  return {{"modes", s.labels()}, {"terms", std::move(terms)}};
}

}  // namespace

std::string report_to_json(const ProtocolReport& report, int indent) {
  json params = json::object();
  for (const auto& [name, value] : report.parameters) params[name] = value;

  json stages = json::array();
  for (const auto& s : report.stages) {
    stages.push_back({{"name", s.name},
                      {"term_count", s.term_count()},
                      {"norm_squared", s.norm_squared},
                      {"modes", s.modes()}});
  }

  json doc = {
      {"library", kLibraryName},
      {"version", kVersion},
      {"protocol", report.protocol},
      {"parameters", std::move(params)},
      {"stages", std::move(stages)},
      {"p_exact", report.p_exact},
      {"p_formula", report.p_formula},
      {"final_fidelity", report.final_fidelity},
      {"final_state", state_json(report.final_state)},
  };
  return doc.dump(indent);
}

std::string report_to_text(const ProtocolReport& report) {
  std::ostringstream out;
  out << std::setprecision(12);
  out << report.protocol << " (" << kLibraryName << ' ' << kVersion << ")\n";
  out << "parameters:";
  for (const auto& [name, value] : report.parameters) out << ' ' << name << '=' << value;
  out << '\n';
  for (const auto& s : report.stages) {
    out << "  " << std::left << std::setw(10) << s.name << " terms=" << std::setw(3) << s.term_count()
        << " norm2=" << std::setw(16) << s.norm_squared << " modes=";
    for (std::size_t i = 0; i < s.modes().size(); ++i) out << (i ? "," : "") << s.modes()[i];
    out << '\n';
  }
  out << "p_exact        " << report.p_exact << '\n';
  out << "p_formula      " << report.p_formula << '\n';
  out << "final_fidelity " << report.final_fidelity << '\n';
  return out.str();
}

}  // namespace ecsim
