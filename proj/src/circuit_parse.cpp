#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "ecsim/circuit.hpp"

namespace ecsim::circuit {

double Multiplier::value() const noexcept { return sqrt2 ? factor * std::sqrt(2.0) : factor; }

bool structurally_equal(const CircuitProgram& a, const CircuitProgram& b) {
  if (a.alpha != b.alpha || a.statements.size() != b.statements.size()) return false;
  for (std::size_t i = 0; i < a.statements.size(); ++i) {
    if (!(a.statements[i].body == b.statements[i].body)) return false;
  }
  return true;
}

ParseError::ParseError(std::string source_name, int line, int column, std::string message, std::string token)
    : std::runtime_error(source_name + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message +
                         (token.empty() ? std::string() : " (at '" + token + "')")),
      line_(line),
      column_(column),
      message_(std::move(message)),
      token_(std::move(token)) {}

namespace {

struct Token {
  std::string_view text;
  int column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' && line[j] != '#') ++j;
    out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

bool is_label(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

enum class ModeState { declared, live, consumed };

class Parser {
 public:
  explicit Parser(std::string name) : name_(std::move(name)) {}

  CircuitProgram run(std::string_view source) {
    CircuitProgram program;
    program.source_name = name_;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= source.size()) {
      const std::size_t end = std::min(source.find('\n', pos), source.size());
      ++line_no;
      line_ = line_no;
      line_text_ = source.substr(pos, end - pos);
      toks_ = tokenize(line_text_);
      if (!toks_.empty()) parse_line(program);
      if (end == source.size()) break;
      pos = end + 1;
    }
    return program;
  }

 private:
  [[noreturn]] void fail(const Token& tok, std::string message) const {
    throw ParseError(name_, line_, tok.column, std::move(message), std::string(tok.text));
  }
  [[noreturn]] void fail_missing(std::string message) const {
    const auto& last = toks_.back();
    throw ParseError(name_, line_, last.column + static_cast<int>(last.text.size()) + 1, std::move(message), "");
  }

  const Token& at(std::size_t i, const char* what) const {
    if (i >= toks_.size()) fail_missing(std::string("expected ") + what);
    return toks_[i];
  }

  void expect_count(std::size_t n) const {
    if (toks_.size() > n) fail(toks_[n], "unexpected token");
    if (toks_.size() < n) fail_missing("too few arguments for '" + std::string(toks_[0].text) + "'");
  }

  void expect_literal(std::size_t i, std::string_view lit) const {
    const auto& t = at(i, std::string("'" + std::string(lit) + "'").c_str());
    if (t.text != lit) fail(t, "expected '" + std::string(lit) + "'");
  }

  double number(std::size_t i) const {
    const auto& t = at(i, "a number");
    double v = 0.0;
    const auto* first = t.text.data();
    const auto* last = first + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) fail(t, "expected a finite number");
    return v;
  }

  Multiplier multiplier(std::size_t i) const {
    const auto& t = at(i, "an amplitude multiplier");
    if (t.text == "sqrt2") return {1.0, true};
    if (t.text == "-sqrt2") return {-1.0, true};
    return {number(i), false};
  }

  std::string label_token(std::size_t i) const {
    const auto& t = at(i, "a mode label");
    if (!is_label(t.text)) fail(t, "invalid mode label");
    return std::string(t.text);
  }

  // A label an optical element may act on: prepared and not yet consumed.
  std::string live_label(std::size_t i) const {
    std::string l = label_token(i);
    auto it = modes_.find(l);
    if (it == modes_.end()) fail(toks_[i], "undeclared mode '" + l + "'");
    if (it->second == ModeState::declared) fail(toks_[i], "mode '" + l + "' has not been prepared");
    if (it->second == ModeState::consumed) fail(toks_[i], "mode '" + l + "' no longer exists");
    return l;
  }

  // A declared label that a preparation may initialize.
  std::string preparable_label(std::size_t i) const {
    std::string l = label_token(i);
    auto it = modes_.find(l);
    if (it == modes_.end()) fail(toks_[i], "undeclared mode '" + l + "'");
    if (it->second != ModeState::declared) fail(toks_[i], "mode '" + l + "' is already prepared");
    return l;
  }

  std::string fresh_label(std::size_t i) const {
    std::string l = label_token(i);
    if (modes_.contains(l)) fail(toks_[i], "mode '" + l + "' is already declared");
    return l;
  }

  void require_distinct(const std::vector<std::size_t>& idx) const {
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = 0; b < a; ++b) {
        if (toks_[idx[a]].text == toks_[idx[b]].text) fail(toks_[idx[a]], "mode listed twice");
      }
    }
  }

  void require_alpha(const CircuitProgram& program) const {
    if (!program.alpha) fail(toks_[0], "alpha must be set before preparing modes");
  }

  // Parses `<n numbers> on <k labels>` starting at token 1.
  std::vector<double> prep_numbers(std::size_t n, std::size_t k) const {
    expect_count(1 + n + 1 + k);
    std::vector<double> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(number(1 + i));
    expect_literal(1 + n, "on");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < k; ++i) idx.push_back(2 + n + i);
    require_distinct(idx);
    return v;
  }

  std::vector<std::string> prep_labels(std::size_t n, std::size_t k) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < k; ++i) labels.push_back(preparable_label(2 + n + i));
    for (const auto& l : labels) modes_[l] = ModeState::live;
    return labels;
  }

  void parse_line(CircuitProgram& program) {
    const std::string_view kw = toks_[0].text;
    if (kw != "term") in_term_block_ = false;

    if (kw == "alpha") {
      expect_count(2);
      if (program.alpha) fail(toks_[0], "alpha is already set");
      const double a = number(1);
      if (!(a > 0.0)) fail(toks_[1], "alpha must be > 0");
      program.alpha = a;
      return;
    }

    StatementBody body;
    if (kw == "modes") {
      if (toks_.size() < 2) fail_missing("expected at least one mode label");
      DeclareModes d;
      for (std::size_t i = 1; i < toks_.size(); ++i) {
        std::string l = label_token(i);
        if (modes_.contains(l)) fail(toks_[i], "duplicate declaration of mode '" + l + "'");
        modes_[l] = ModeState::declared;
        d.labels.push_back(std::move(l));
      }
      last_modes_ = d.labels;
      body = std::move(d);
    } else if (kw == "term") {
      require_alpha(program);
      if (last_modes_.empty()) fail(toks_[0], "term needs a preceding modes statement");
      Term t;
      t.coeff_re = number(1);
      t.coeff_im = number(2);
      expect_literal(3, ":");
      for (std::size_t i = 4; i < toks_.size(); ++i) t.multipliers.push_back(multiplier(i));
      if (t.multipliers.size() < last_modes_.size()) {
        fail_missing("term needs " + std::to_string(last_modes_.size()) + " amplitude multipliers");
      }
      if (t.multipliers.size() > last_modes_.size()) fail(toks_[4 + last_modes_.size()], "unexpected token");
      if (!in_term_block_) {
        for (const auto& l : last_modes_) {
          if (modes_[l] != ModeState::declared) fail(toks_[0], "mode '" + l + "' is already prepared");
        }
        for (const auto& l : last_modes_) modes_[l] = ModeState::live;
        in_term_block_ = true;
      }
      body = std::move(t);
    } else if (kw == "prep_ecp1_input") {
      require_alpha(program);
      auto v = prep_numbers(2, 4);
      auto l = prep_labels(2, 4);
      body = PrepareEcp1Input{v[0], v[1], {l[0], l[1], l[2], l[3]}};
    } else if (kw == "prep_ecp1_anc") {
      require_alpha(program);
      auto v = prep_numbers(2, 1);
      auto l = prep_labels(2, 1);
      body = PrepareEcp1Ancilla{v[0], v[1], l[0]};
    } else if (kw == "prep_ecp2_input") {
      require_alpha(program);
      auto v = prep_numbers(4, 4);
      auto l = prep_labels(4, 4);
      body = PrepareEcp2Input{v[0], v[1], v[2], v[3], {l[0], l[1], l[2], l[3]}};
    } else if (kw == "prep_ecp2_twomode") {
      require_alpha(program);
      auto v = prep_numbers(4, 2);
      auto l = prep_labels(4, 2);
      body = PrepareEcp2TwoMode{v[0], v[1], v[2], v[3], {l[0], l[1]}};
    } else if (kw == "prep_ecp2_g") {
      require_alpha(program);
      auto v = prep_numbers(4, 1);
      auto l = prep_labels(4, 1);
      body = PrepareEcp2G{v[0], v[1], v[2], v[3], l[0]};
    } else if (kw == "bs") {
      expect_count(6);
      Bs b;
      b.in_i = live_label(1);
      b.in_j = live_label(2);
      require_distinct({1, 2});
      expect_literal(3, "->");
      b.out_i = label_token(4);
      b.out_j = label_token(5);
      require_distinct({4, 5});
      if (b.out_i != b.in_i) b.out_i = fresh_label(4);
      if (b.out_j != b.in_j) b.out_j = fresh_label(5);
      for (const auto& l : {b.in_i, b.in_j}) modes_[l] = ModeState::consumed;
      for (const auto& l : {b.out_i, b.out_j}) modes_[l] = ModeState::live;
      body = std::move(b);
    } else if (kw == "bsvac") {
      expect_count(5);
      BsVac b;
      b.in = live_label(1);
      expect_literal(2, "->");
      b.out_1 = fresh_label(3);
      b.out_2 = fresh_label(4);
      require_distinct({3, 4});
      modes_[b.in] = ModeState::consumed;
      modes_[b.out_1] = ModeState::live;
      modes_[b.out_2] = ModeState::live;
      body = std::move(b);
    } else if (kw == "swap") {
      expect_count(3);
      Swap s{live_label(1), live_label(2)};
      require_distinct({1, 2});
      body = std::move(s);
    } else if (kw == "selectvac") {
      if (toks_.size() < 2) fail_missing("expected at least one mode label");
      SelectVac s;
      std::vector<std::size_t> idx;
      for (std::size_t i = 1; i < toks_.size(); ++i) {
        s.modes.push_back(live_label(i));
        idx.push_back(i);
      }
      require_distinct(idx);
      for (const auto& l : s.modes) modes_[l] = ModeState::consumed;
      body = std::move(s);
    } else if (kw == "projvac" || kw == "discard") {
      expect_count(2);
      std::string l = live_label(1);
      modes_[l] = ModeState::consumed;
      if (kw == "projvac") {
        body = ProjVac{std::move(l)};
      } else {
        body = Discard{std::move(l)};
      }
    } else if (kw == "normalize") {
      expect_count(1);
      body = Normalize{};
    } else if (kw == "assert_terms") {
      expect_count(2);
      const auto& t = toks_[1];
      std::size_t n = 0;
      auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), n);
      if (ec != std::errc() || ptr != t.text.data() + t.text.size()) fail(t, "expected a non-negative integer");
      body = AssertTerms{n};
    } else if (kw == "assert_prob_ge") {
      expect_count(2);
      body = AssertProbGe{number(1)};
    } else if (kw == "report") {
      if (toks_.size() > 2) fail(toks_[2], "unexpected token");
      Report r;
      if (toks_.size() == 2) {
        const auto t = toks_[1].text;
        if (t == "ecp1") {
          r.target = ReportTarget::ecp1;
        } else if (t == "ecp2") {
          r.target = ReportTarget::ecp2;
        } else if (t == "none") {
          r.target = ReportTarget::none;
        } else {
          fail(toks_[1], "report target must be ecp1, ecp2 or none");
        }
      }
      body = r;
    } else {
      fail(toks_[0], "unknown statement");
    }
    program.statements.push_back({std::move(body), line_});
  }

  std::string name_;
  int line_ = 0;
  std::string_view line_text_;
  std::vector<Token> toks_;
  std::unordered_map<std::string, ModeState> modes_;
  std::vector<std::string> last_modes_;
  bool in_term_block_ = false;
};

std::string fmt_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string fmt_multiplier(const Multiplier& m) {
  if (m.sqrt2) return m.factor < 0 ? "-sqrt2" : "sqrt2";
  return fmt_number(m.factor);
}

template <typename Range>
std::string join(const Range& r) {
  std::string out;
  for (const auto& s : r) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

struct Formatter {
  std::string operator()(const DeclareModes& d) const { return "modes " + join(d.labels); }
  std::string operator()(const Term& t) const {
    std::string s = "term " + fmt_number(t.coeff_re) + " " + fmt_number(t.coeff_im) + " :";
    for (const auto& m : t.multipliers) s += " " + fmt_multiplier(m);
    return s;
  }
  std::string operator()(const PrepareEcp1Input& p) const {
    return "prep_ecp1_input " + fmt_number(p.beta) + " " + fmt_number(p.gamma) + " on " + join(p.modes);
  }
  std::string operator()(const PrepareEcp1Ancilla& p) const {
    return "prep_ecp1_anc " + fmt_number(p.beta) + " " + fmt_number(p.gamma) + " on " + p.mode;
  }
  static std::string four(double b, double g, double d, double e) {
    return fmt_number(b) + " " + fmt_number(g) + " " + fmt_number(d) + " " + fmt_number(e);
  }
  std::string operator()(const PrepareEcp2Input& p) const {
    return "prep_ecp2_input " + four(p.beta, p.gamma, p.delta, p.eta) + " on " + join(p.modes);
  }
  std::string operator()(const PrepareEcp2TwoMode& p) const {
    return "prep_ecp2_twomode " + four(p.beta, p.gamma, p.delta, p.eta) + " on " + join(p.modes);
  }
  std::string operator()(const PrepareEcp2G& p) const {
    return "prep_ecp2_g " + four(p.beta, p.gamma, p.delta, p.eta) + " on " + p.mode;
  }
  std::string operator()(const Bs& b) const {
    return "bs " + b.in_i + " " + b.in_j + " -> " + b.out_i + " " + b.out_j;
  }
  std::string operator()(const BsVac& b) const { return "bsvac " + b.in + " -> " + b.out_1 + " " + b.out_2; }
  std::string operator()(const Swap& s) const { return "swap " + s.mode_i + " " + s.mode_j; }
  std::string operator()(const SelectVac& s) const { return "selectvac " + join(s.modes); }
  std::string operator()(const ProjVac& p) const { return "projvac " + p.mode; }
  std::string operator()(const Discard& d) const { return "discard " + d.mode; }
  std::string operator()(const Normalize&) const { return "normalize"; }
  std::string operator()(const AssertTerms& a) const { return "assert_terms " + std::to_string(a.count); }
  std::string operator()(const AssertProbGe& a) const { return "assert_prob_ge " + fmt_number(a.threshold); }
  std::string operator()(const Report& r) const {
    switch (r.target) {
      case ReportTarget::ecp1:
        return "report ecp1";
      case ReportTarget::ecp2:
        return "report ecp2";
      case ReportTarget::none:
        break;
    }
    return "report";
  }
};

}  // namespace

CircuitProgram parse_circuit(std::string_view source, std::string source_name) {
  return Parser(std::move(source_name)).run(source);
}

std::string format_statement(const StatementBody& statement) { return std::visit(Formatter{}, statement); }

std::string format_program(const CircuitProgram& program) {
  std::ostringstream out;
  out << "# ecsim circuit\n";
  if (program.alpha) out << "alpha " << fmt_number(*program.alpha) << '\n';
  for (const auto& s : program.statements) out << format_statement(s.body) << '\n';
  return out.str();
}

}  // namespace ecsim::circuit
