#include "noetherkit/catalog.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#ifndef NOETHERKIT_CATALOG_DIR
#define NOETHERKIT_CATALOG_DIR "data/catalog"
#endif

namespace noetherkit {

namespace fs = std::filesystem;

std::string to_string(RecordFlag f) {
  switch (f) {
    case RecordFlag::Verified: return "verified";
    case RecordFlag::Reconstructed: return "reconstructed";
    case RecordFlag::Unverified: return "unverified";
  }
  return "?";
}

std::string to_string(ClaimVerdict v) {
  switch (v) {
    case ClaimVerdict::Pass: return "pass";
    case ClaimVerdict::Fail: return "fail";
    case ClaimVerdict::ExpectedFail: return "expected-fail";
    case ClaimVerdict::Flagged: return "flagged";
    case ClaimVerdict::Info: return "info";
  }
  return "?";
}

std::string default_catalog_dir() { return NOETHERKIT_CATALOG_DIR; }

std::string point_to_string(const Point& p) {
  // Checks run on the real side after on-shell substitution.
  Point shown;
  for (Sym s : {Sym::x, Sym::f, Sym::g, Sym::df, Sym::dg, Sym::A, Sym::b}) {
    if (p.has(s)) shown.set(s, p[s]);
  }
  return shown.describe();
}

namespace {

std::string trim(std::string_view s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

struct Line {
  int number;
  std::string key;
  std::string value;
  int value_column;  // 1-based column of value start
  std::string raw;
};

struct Section {
  std::string kind;
  std::string arg;
  int line;
  std::vector<Line> lines;
};

// Reads the sectioned text into sections; comments run from '#' to end of line.
std::vector<Section> read_sections(const std::string& text) {
  std::vector<Section> out;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::string line = raw.substr(0, raw.find('#'));
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[' && t.back() == ']' && t.find('=') == std::string::npos) {
      std::string inner = trim(t.substr(1, t.size() - 2));
      std::size_t sp = inner.find(' ');
      Section s;
      s.kind = sp == std::string::npos ? inner : inner.substr(0, sp);
      s.arg = sp == std::string::npos ? "" : trim(inner.substr(sp + 1));
      s.line = number;
      out.push_back(std::move(s));
      continue;
    }
    if (out.empty()) throw ParseError("content before the first section header", number, 1);
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected 'key = value'", number, static_cast<int>(line.find_first_not_of(" \t")) + 1);
    }
    Line l;
    l.number = number;
    l.key = trim(line.substr(0, eq));
    std::size_t vstart = line.find_first_not_of(" \t", eq + 1);
    l.value = vstart == std::string::npos ? "" : trim(line.substr(vstart));
    l.value_column = static_cast<int>(vstart == std::string::npos ? eq + 2 : vstart + 1);
    l.raw = line;
    if (l.key.empty()) throw ParseError("empty key", number, 1);
    out.back().lines.push_back(std::move(l));
  }
  return out;
}

class RecordParser {
 public:
  RecordParser(std::string file, const LoadOptions& opts) : file_(std::move(file)), opts_(opts) {}

  std::optional<CatalogRecord> run(const std::string& text);

 private:
  std::string file_;
  LoadOptions opts_;
  CatalogRecord r_;
  std::vector<std::pair<std::string, std::string>> lets_;

  std::string expand(const std::string& text) const {
    std::string s = text;
    for (auto it = lets_.rbegin(); it != lets_.rend(); ++it) {
      const auto& [name, body] = *it;
      std::string out;
      std::size_t k = 0;
      while (k < s.size()) {
        if (s.compare(k, name.size(), name) == 0 && (k == 0 || !is_ident_char(s[k - 1])) &&
            (k + name.size() == s.size() || !is_ident_char(s[k + name.size()]))) {
          out += "(" + body + ")";
          k += name.size();
        } else {
          out += s[k++];
        }
      }
      s = std::move(out);
    }
    return s;
  }

  Expr expr(const Line& l, const std::string& text, int offset = 0) const {
    std::string expanded = expand(text);
    try {
      return parse(expanded);
    } catch (const ParseError& e) {
      int col = l.value_column + offset + (expanded == text ? e.column() - 1 : 0);
      throw ParseError(file_ + ": " + std::string(e.what()).substr(0, std::string(e.what()).find(" at line")), l.number,
                       col);
    }
  }
  Expr expr(const Line& l) const { return expr(l, l.value); }

  // Value parts separated by ';', each with its column offset.
  std::vector<std::pair<std::string, int>> parts(const Line& l) const {
    std::vector<std::pair<std::string, int>> out;
    std::size_t start = 0;
    while (true) {
      std::size_t semi = l.value.find(';', start);
      std::string piece = l.value.substr(start, semi == std::string::npos ? std::string::npos : semi - start);
      std::size_t lead = piece.find_first_not_of(" \t");
      out.emplace_back(trim(piece), static_cast<int>(start + (lead == std::string::npos ? 0 : lead)));
      if (semi == std::string::npos) break;
      start = semi + 1;
    }
    return out;
  }

  [[noreturn]] void invalid(const std::string& field, const std::string& what) const {
    throw ValidationError(r_.name.empty() ? file_ : r_.name, field, what);
  }

  double number(const Line& l, const std::string& text) const {
    try {
      std::size_t used = 0;
      double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    } catch (const std::exception&) {
      throw ParseError(file_ + ": expected a number, got '" + text + "'", l.number, l.value_column);
    }
  }

  void record_section(const Section& s);
  void lagrangian_section(const Section& s);
  void system_section(const Section& s);
  void symmetry_section(const Section& s);
  void operator_section(const Section& s);
  void pair_section(const Section& s);
  void algebra_section(const Section& s);
  void domain_section(const Section& s);
  void trajectory_section(const Section& s);
  void validate();
};

void RecordParser::record_section(const Section& s) {
  for (const auto& l : s.lines) {
    if (l.key == "name") {
      r_.name = l.value;
    } else if (l.key == "description") {
      r_.description = l.value;
    } else if (l.key == "flag") {
      if (l.value == "verified") r_.flag = RecordFlag::Verified;
      else if (l.value == "reconstructed") r_.flag = RecordFlag::Reconstructed;
      else if (l.value == "unverified") r_.flag = RecordFlag::Unverified;
      else throw ParseError(file_ + ": unknown flag '" + l.value + "'", l.number, l.value_column);
    } else if (l.key == "operators") {
      r_.expected_operators = static_cast<int>(number(l, l.value));
    } else if (l.key == "count") {
      r_.count_complex = l.value == "complex";
    } else if (l.key == "coupled") {
      r_.coupled_required = l.value == "required";
    } else if (l.key == "independent") {
      r_.independent_integrals = static_cast<int>(number(l, l.value));
    } else {
      throw ParseError(file_ + ": unknown key '" + l.key + "' in [record]", l.number, 1);
    }
  }
}

void RecordParser::lagrangian_section(const Section& s) {
  std::optional<Expr> L1, L2;
  for (const auto& l : s.lines) {
    if (l.key == "L") r_.lagrangian = expr(l);
    else if (l.key == "Lalt") r_.alt_lagrangian = expr(l);
    else if (l.key == "L1") L1 = expr(l);
    else if (l.key == "L2") L2 = expr(l);
    else if (l.key == "Lclassical") r_.classical_lagrangian = expr(l);
    else throw ParseError(file_ + ": unknown key '" + l.key + "' in [lagrangian]", l.number, 1);
  }
  if (L1.has_value() != L2.has_value()) invalid("lagrangian", "L1 and L2 must be given together");
  if (L1) r_.real_lagrangians = std::make_pair(*L1, *L2);
}

void RecordParser::system_section(const Section& s) {
  std::optional<Expr> w1, w2, e1, e2;
  for (const auto& l : s.lines) {
    if (l.key == "w1") {
      w1 = expr(l);
    } else if (l.key == "w2") {
      w2 = expr(l);
    } else if (l.key == "eq1" || l.key == "eq2") {
      std::size_t eq = l.value.find('=');
      if (eq == std::string::npos) throw ParseError(file_ + ": expected 'lhs = rhs'", l.number, l.value_column);
      Expr lhs = expr(l, l.value.substr(0, eq));
      Expr rhs = expr(l, l.value.substr(eq + 1), static_cast<int>(eq + 1));
      (l.key == "eq1" ? e1 : e2) = lhs - rhs;
    } else if (l.key == "from") {
      if (l.value != "rcode" && l.value != "lagrangian") {
        throw ParseError(file_ + ": 'from' must be rcode or lagrangian", l.number, l.value_column);
      }
      r_.system_source = l.value;
    } else {
      throw ParseError(file_ + ": unknown key '" + l.key + "' in [system]", l.number, 1);
    }
  }
  if (w1 && w2) {
    r_.system = {*w1, *w2};
    r_.system_source = "explicit";
  } else if (e1 && e2) {
    try {
      r_.system = solve_second_order(*e1, *e2);
    } catch (const DegenerateLagrangian& e) {
      invalid("system", e.what());
    }
    r_.system_source = "implicit";
  } else if (r_.system_source.empty()) {
    invalid("system", "give w1 and w2, eq1 and eq2, or 'from'");
  }
}

void RecordParser::symmetry_section(const Section& s) {
  for (const auto& l : s.lines) {
    auto p = parts(l);
    if (p.size() < 3) throw ParseError(file_ + ": expected 'xi ; eta ; gauge'", l.number, l.value_column);
    CatalogSymmetry sym;
    sym.name = l.key;
    sym.Z = {expr(l, p[0].first, p[0].second), expr(l, p[1].first, p[1].second)};
    if (p[2].first != "?") sym.gauge = expr(l, p[2].first, p[2].second);
    for (std::size_t k = 3; k < p.size(); ++k) {
      if (p[k].first == "alt") sym.alternative = true;
      else if (p[k].first == "classical") sym.classical = true;
      else if (p[k].first == "reconstructed") sym.reconstructed = true;
      else throw ParseError(file_ + ": unknown symmetry option '" + p[k].first + "'", l.number,
                            l.value_column + p[k].second);
    }
    r_.symmetries.push_back(std::move(sym));
  }
}

void RecordParser::operator_section(const Section& s) {
  for (const auto& l : s.lines) {
    auto p = parts(l);
    if (p.size() < 3) throw ParseError(file_ + ": expected 'xi ; eta_f ; eta_g'", l.number, l.value_column);
    CatalogOperator op;
    op.name = l.key;
    op.X = {expr(l, p[0].first, p[0].second), expr(l, p[1].first, p[1].second), expr(l, p[2].first, p[2].second)};
    for (std::size_t k = 3; k < p.size(); ++k) {
      if (p[k].first == "lie=yes") op.expect_lie = true;
      else if (p[k].first == "lie=no") op.expect_lie = false;
      else if (p[k].first == "extra") op.extra = true;
      else throw ParseError(file_ + ": unknown operator option '" + p[k].first + "'", l.number,
                            l.value_column + p[k].second);
    }
    r_.operators.push_back(std::move(op));
  }
}

void RecordParser::pair_section(const Section& s) {
  CatalogIntegral ci;
  ci.name = s.arg;
  if (ci.name.empty()) throw ParseError(file_ + ": [pair] needs a name", s.line, 1);
  std::optional<Expr> I1, I2, R1, R2, C, PC;
  bool generate = false;
  for (const auto& l : s.lines) {
    if (l.key == "symmetry") ci.symmetry = l.value;
    else if (l.key == "I1") I1 = expr(l);
    else if (l.key == "I2") I2 = expr(l);
    else if (l.key == "reading1") R1 = expr(l);
    else if (l.key == "reading2") R2 = expr(l);
    else if (l.key == "complex") C = expr(l);
    else if (l.key == "printed_complex") PC = expr(l);
    else if (l.key == "generate") generate = l.value == "yes";
    else if (l.key == "note") ci.note = l.value;
    else throw ParseError(file_ + ": unknown key '" + l.key + "' in [pair]", l.number, 1);
  }
  if (I1.has_value() != I2.has_value()) invalid("pair " + ci.name, "I1 and I2 must be given together");
  if (R1.has_value() != R2.has_value()) invalid("pair " + ci.name, "reading1 and reading2 must be given together");
  if (I1 && PC) invalid("pair " + ci.name, "give I1/I2 or printed_complex, not both");
  if (I1) ci.printed = IntegralPair{*I1, *I2};
  if (PC) {
    VarContext::complex_jet().require(*PC, "pair " + ci.name);
    RealPair p = realify(*PC);
    ci.printed = IntegralPair{p.re, p.im};
  }
  if (R1) {
    ci.reading = {*R1, *R2};
  } else if (C) {
    VarContext::complex_jet().require(*C, "pair " + ci.name);
    RealPair p = realify(*C);
    ci.reading = {p.re, p.im};
  } else if (generate) {
    ci.reading = {Expr(0), Expr(0)};  // filled in by validate()
    ci.corrected = true;
    ci.note = ci.note.empty() ? "generated" : ci.note;
  } else if (ci.printed) {
    ci.reading = *ci.printed;
  } else {
    invalid("pair " + ci.name, "no printed pair and no reading");
  }
  if (R1 || C) ci.corrected = true;
  if (generate && ci.note.find("generated") == std::string::npos) ci.note += " (generated)";
  r_.integrals.push_back(std::move(ci));
}

void RecordParser::algebra_section(const Section& s) {
  CatalogAlgebra a;
  a.name = s.arg;
  for (const auto& l : s.lines) {
    if (l.key == "basis") {
      std::istringstream in(l.value);
      std::string name;
      while (in >> name) a.basis.push_back(name);
    } else if (l.key == "closed") {
      a.closed = l.value == "yes";
    } else if (l.key == "match") {
      a.exact = l.value == "exact";
    } else if (l.key == "residual") {
      a.residual = l.value;
    } else if (!l.key.empty() && l.key.front() == '[') {
      a.printed.push_back(l.key + " = " + l.value);
    } else {
      throw ParseError(file_ + ": unknown key '" + l.key + "' in [algebra]", l.number, 1);
    }
  }
  r_.algebras.push_back(std::move(a));
}

void RecordParser::domain_section(const Section& s) {
  for (const auto& l : s.lines) {
    if (l.key == "exclude") {
      r_.domain.exclusions.push_back(expr(l));
    } else if (l.key == "seed") {
      r_.domain.seed = static_cast<std::uint64_t>(std::stoull(l.value, nullptr, 0));
    } else {
      auto sym = sym_from_name(l.key);
      if (!sym) throw ParseError(file_ + ": unknown symbol '" + l.key + "' in [domain]", l.number, 1);
      auto v = split(l.value, ',');
      if (v.size() != 2) throw ParseError(file_ + ": expected 'lo, hi'", l.number, l.value_column);
      double lo = number(l, v[0]), hi = number(l, v[1]);
      if (!(lo < hi)) invalid("domain", "empty interval for " + l.key);
      r_.domain.set(*sym, lo, hi);
    }
  }
}

void RecordParser::trajectory_section(const Section& s) {
  CatalogTrajectory t;
  for (const auto& l : s.lines) {
    if (l.key == "x0") {
      t.start.x0 = number(l, l.value);
    } else if (l.key == "state") {
      auto v = split(l.value, ',');
      if (v.size() != 4) throw ParseError(file_ + ": state needs f, g, df, dg", l.number, l.value_column);
      for (int k = 0; k < 4; ++k) t.start.state[static_cast<std::size_t>(k)] = number(l, v[static_cast<std::size_t>(k)]);
    } else if (l.key == "T") {
      t.T = number(l, l.value);
    } else if (l.key == "step") {
      t.step = number(l, l.value);
    } else if (l.key == "guard") {
      t.guards.push_back(expr(l));
    } else if (l.key == "A" || l.key == "b") {
      t.start.params.set(l.key == "A" ? Sym::A : Sym::b, number(l, l.value));
    } else {
      throw ParseError(file_ + ": unknown key '" + l.key + "' in [trajectory]", l.number, 1);
    }
  }
  r_.trajectory = t;
}

void RecordParser::validate() {
  if (r_.name.empty()) invalid("record", "missing name");
  VarContext::complex_jet().require(r_.lagrangian, r_.name + ": lagrangian");
  if (r_.lagrangian.is_zero()) invalid("lagrangian", "missing L");
  if (r_.alt_lagrangian) VarContext::complex_jet().require(*r_.alt_lagrangian, r_.name + ": Lalt");
  if (r_.real_lagrangians) {
    VarContext::real_jet().require(r_.real_lagrangians->first, r_.name + ": L1");
    VarContext::real_jet().require(r_.real_lagrangians->second, r_.name + ": L2");
  }
  if (r_.rcode) VarContext::complex_jet().require(*r_.rcode, r_.name + ": rcode");

  ScalarRCODE computed;
  try {
    computed = el_scalar(r_.lagrangian, r_.domain, opts_.zero);
  } catch (const Error& e) {
    invalid("lagrangian", e.what());
  }
  if (r_.system_source == "rcode" || r_.system_source == "lagrangian") {
    if (r_.system_source == "rcode" && !r_.rcode) invalid("system", "from = rcode without [rcode] w");
    r_.system = realify(r_.system_source == "rcode" ? ScalarRCODE{*r_.rcode} : computed);
  }
  VarContext::real_jet().require(r_.system.w1, r_.name + ": system");
  VarContext::real_jet().require(r_.system.w2, r_.name + ": system");

  std::map<std::string, int> seen;
  for (const auto& s : r_.symmetries) {
    if (seen[s.name]++) invalid("symmetries", "duplicate name " + s.name);
    VarContext::complex_base().require(s.Z.xi, r_.name + ": " + s.name);
    VarContext::complex_base().require(s.Z.eta, r_.name + ": " + s.name);
    if (s.gauge) VarContext::complex_base().require(*s.gauge, r_.name + ": gauge of " + s.name);
    if (s.alternative && !r_.alt_lagrangian) invalid("symmetries", s.name + " refers to a missing Lalt");
    if (s.classical && !r_.classical_lagrangian) invalid("symmetries", s.name + " needs Lclassical");
  }
  for (const auto& op : r_.operators) {
    if (seen[op.name]++) invalid("operators", "duplicate name " + op.name);
    VarContext::real_base().require(op.X.xi, r_.name + ": " + op.name);
    VarContext::real_base().require(op.X.eta_f, r_.name + ": " + op.name);
    VarContext::real_base().require(op.X.eta_g, r_.name + ": " + op.name);
  }
  for (auto& ci : r_.integrals) {
    if (seen[ci.name]++) invalid("integrals", "duplicate name " + ci.name);
    const CatalogSymmetry* sym = nullptr;
    if (!ci.symmetry.empty()) {
      sym = find_symmetry(r_, ci.symmetry);
      if (!sym) invalid("pair " + ci.name, "unknown symmetry " + ci.symmetry);
    }
    if (ci.note.find("generated") != std::string::npos && ci.reading.I1.is_zero() && ci.reading.I2.is_zero()) {
      if (!sym || !sym->gauge) invalid("pair " + ci.name, "generate needs a symmetry with a stated gauge");
      ci.reading = noether_integral(sym->Z, sym->alternative ? *r_.alt_lagrangian : r_.lagrangian, *sym->gauge);
    }
    for (const Expr* e : {&ci.reading.I1, &ci.reading.I2}) VarContext::real_jet().require(*e, r_.name + ": " + ci.name);
    if (ci.printed) {
      VarContext::real_jet().require(ci.printed->I1, r_.name + ": " + ci.name);
      VarContext::real_jet().require(ci.printed->I2, r_.name + ": " + ci.name);
    }
  }
  for (const auto& a : r_.algebras) {
    for (const auto& n : a.basis) {
      if (!find_operator(r_, n)) invalid("algebra " + a.name, "unknown operator " + n);
    }
    if (a.residual && !find_operator(r_, *a.residual)) invalid("algebra " + a.name, "unknown operator " + *a.residual);
    for (const auto& line : a.printed) {
      try {
        parse_printed_bracket(line, a.basis);
      } catch (const Error& e) {
        invalid("algebra " + a.name, e.what());
      }
    }
  }

  // Every symbol used in a check must be drawable.
  SymSet used = r_.system.w1.symbols() | r_.system.w2.symbols();
  RealPair Lr = realify(r_.lagrangian);
  used |= Lr.re.symbols() | Lr.im.symbols();
  for (const auto& ci : r_.integrals) used |= ci.reading.I1.symbols() | ci.reading.I2.symbols();
  if (!r_.domain.covers(used)) invalid("domain", "does not cover every symbol in the record");

  if (r_.trajectory) {
    if (!(r_.trajectory->step > 0) || r_.trajectory->T < r_.trajectory->step) invalid("trajectory", "bad T or step");
    for (Sym p : {Sym::A, Sym::b}) {
      if (used.test(index(p)) && !r_.trajectory->start.params.has(p)) {
        invalid("trajectory", std::string("needs a value for parameter ") + std::string(sym_name(p)));
      }
    }
  }

  if (opts_.check_consistency) {
    System2 expect = realify(computed);
    std::vector<Expr> d{expect.w1 - r_.system.w1, expect.w2 - r_.system.w2};
    ZeroTestResult z;
    try {
      z = all_zero(d, r_.domain, opts_.zero);
    } catch (const DomainError& e) {
      invalid("system", e.what());
    }
    if (!z.zero) invalid("system", "does not match the Euler-Lagrange equation of L");
  }
}

std::optional<CatalogRecord> RecordParser::run(const std::string& text) {
  auto sections = read_sections(text);
  if (sections.empty()) return std::nullopt;
  r_.file = file_;
  r_.domain = SampleDomain::defaults();
  // [record] and [let] first so later sections can use them, whatever the order.
  for (const auto& s : sections) {
    if (s.kind == "record") record_section(s);
    if (s.kind == "let") {
      for (const auto& l : s.lines) {
        std::string body = expand(l.value);
        parse(body);  // reject a bad definition at its own line
        lets_.emplace_back(l.key, body);
      }
    }
  }
  for (const auto& s : sections) {
    if (s.kind == "record" || s.kind == "let") continue;
    if (s.kind == "lagrangian") lagrangian_section(s);
    else if (s.kind == "rcode") {
      for (const auto& l : s.lines) {
        if (l.key != "w") throw ParseError(file_ + ": unknown key '" + l.key + "' in [rcode]", l.number, 1);
        r_.rcode = expr(l);
      }
    } else if (s.kind == "system") system_section(s);
    else if (s.kind == "symmetries") symmetry_section(s);
    else if (s.kind == "operators") operator_section(s);
    else if (s.kind == "pair") pair_section(s);
    else if (s.kind == "algebra") algebra_section(s);
    else if (s.kind == "domain") domain_section(s);
    else if (s.kind == "trajectory") trajectory_section(s);
    else throw ParseError(file_ + ": unknown section [" + s.kind + "]", s.line, 1);
  }
  validate();
  return std::move(r_);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot open " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

std::optional<CatalogRecord> parse_record(const std::string& text, const std::string& file, const LoadOptions& opts) {
  return RecordParser(file, opts).run(text);
}

std::vector<CatalogRecord> load_catalog(const std::string& path, const LoadOptions& opts) {
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& e : fs::directory_iterator(path)) {
      if (e.is_regular_file() && e.path().extension() == ".rec") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
  } else if (fs::exists(path)) {
    files.push_back(path);
  } else {
    throw Error("catalog path not found: " + path);
  }
  std::vector<CatalogRecord> out;
  for (const auto& f : files) {
    if (auto r = parse_record(read_file(f), f.filename().string(), opts)) out.push_back(std::move(*r));
  }
  return out;
}

const CatalogRecord& find_record(const std::vector<CatalogRecord>& records, const std::string& name) {
  for (const auto& r : records) {
    if (r.name == name) return r;
  }
  throw Error("no catalog record named '" + name + "'");
}

const CatalogOperator* find_operator(const CatalogRecord& r, const std::string& name) {
  for (const auto& op : r.operators) {
    if (op.name == name) return &op;
  }
  return nullptr;
}

const CatalogSymmetry* find_symmetry(const CatalogRecord& r, const std::string& name) {
  for (const auto& s : r.symmetries) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

bool proportional(const RealVectorField& a, const RealVectorField& b, const SampleDomain& dom,
                  const ZeroTestOptions& opts) {
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  // Fit a constant on sampled component values, then confirm symbolically.
  std::vector<Expr> roots{a.xi, a.eta_f, a.eta_g, b.xi, b.eta_f, b.eta_g};
  SymSet needed;
  for (const auto& e : roots) needed |= e.symbols();
  auto pts = sample_points(dom, opts, needed);
  CompiledExpr code(roots);
  std::vector<double> v(6);
  double num = 0, den = 0;
  for (const auto& p : pts) {
    code.evaluate(p, v);
    for (int k = 0; k < 3; ++k) {
      num += v[static_cast<std::size_t>(k)] * v[static_cast<std::size_t>(k + 3)];
      den += v[static_cast<std::size_t>(k + 3)] * v[static_cast<std::size_t>(k + 3)];
    }
  }
  if (den == 0.0) return false;
  auto c = snap_rational(num / den, 720, 1e-7);
  if (!c || *c == Rational(0)) return false;
  Expr s(*c);
  std::vector<Expr> d{a.xi - s * b.xi, a.eta_f - s * b.eta_f, a.eta_g - s * b.eta_g};
  return all_zero(d, dom, opts).zero;
}

std::vector<NamedField> split_operators(const CatalogRecord& r) {
  std::vector<NamedField> out;
  for (const auto& s : r.symmetries) {
    if (s.classical) continue;
    auto p = split_symmetry(s.Z);
    if (!p.X1.is_zero()) out.push_back({s.name + ".1", p.X1});
    if (!p.X2.is_zero()) out.push_back({s.name + ".2", p.X2});
  }
  return out;
}

int operator_count(const CatalogRecord& r) {
  if (r.count_complex) {
    return static_cast<int>(std::count_if(r.symmetries.begin(), r.symmetries.end(),
                                          [](const CatalogSymmetry& s) { return !s.classical && !s.alternative; }));
  }
  std::vector<RealVectorField> distinct;
  for (const auto& s : r.symmetries) {
    if (s.classical || s.alternative) continue;
    auto p = split_symmetry(s.Z);
    for (const auto* X : {&p.X1, &p.X2}) {
      if (X->is_zero()) continue;
      bool dup = std::any_of(distinct.begin(), distinct.end(),
                             [&](const RealVectorField& Y) { return proportional(*X, Y, r.domain); });
      if (!dup) distinct.push_back(*X);
    }
  }
  return static_cast<int>(distinct.size());
}

bool RecordReport::ok() const {
  return std::none_of(claims.begin(), claims.end(), [](const Claim& c) { return c.verdict == ClaimVerdict::Fail; });
}

const Claim* RecordReport::find(const std::string& claim) const {
  for (const auto& c : claims) {
    if (c.claim == claim) return &c;
  }
  return nullptr;
}

namespace {

class Verifier {
 public:
  Verifier(const CatalogRecord& r, const VerifyOptions& opts) : r_(r), opts_(opts), dom_(r.domain) {
    if (opts.seed) dom_.seed = *opts.seed;
    report_.record = r.name;
  }

  RecordReport run();

 private:
  const CatalogRecord& r_;
  VerifyOptions opts_;
  SampleDomain dom_;
  RecordReport report_;
  std::optional<Trajectory> traj_;
  std::string traj_error_;

  Claim& add(std::string claim, ClaimVerdict v, std::string detail = {}) {
    report_.claims.push_back({std::move(claim), v, std::move(detail), std::nullopt, std::nullopt});
    return report_.claims.back();
  }
  Claim& add(std::string claim, const Verdict& v, bool flagged_on_fail = false) {
    ClaimVerdict cv = v.pass ? ClaimVerdict::Pass : (flagged_on_fail ? ClaimVerdict::Flagged : ClaimVerdict::Fail);
    Claim& c = add(std::move(claim), cv, v.detail);
    if (!v.pass) c.witness = v.witness;
    return c;
  }
  // Runs a check, turning library errors into a failed claim.
  template <class F>
  void guarded(const std::string& claim, F&& f) {
    try {
      f();
    } catch (const Error& e) {
      add(claim, ClaimVerdict::Fail, e.what());
    }
  }

  const Expr& lagrangian_for(const CatalogSymmetry& s) const {
    return s.alternative ? *r_.alt_lagrangian : r_.lagrangian;
  }

  void lagrangians();
  void symmetries();
  void operators();
  void integrals();
  void algebras();
  void independence();
  double drift_of(const IntegralPair& I, std::string& error);
  std::optional<std::pair<Rational, int>> generator_scale(const Expr& I, const IntegralPair& J);
};

void Verifier::lagrangians() {
  guarded("cauchy-riemann L", [&] {
    add("cauchy-riemann L", Verdict::from(check_cauchy_riemann(realify(r_.lagrangian), dom_, opts_.zero)));
  });
  guarded("el-consistency", [&] {
    System2 expect = realify(el_scalar(r_.lagrangian, dom_, opts_.zero));
    std::vector<Expr> d{expect.w1 - r_.system.w1, expect.w2 - r_.system.w2};
    add("el-consistency", Verdict::from(all_zero(d, dom_, opts_.zero), "realified EL equation vs stored system"));
  });
  guarded("el-residuals", [&] {
    RealPair L = realify(r_.lagrangian);
    add("el-residuals", Verdict::from(check_lagrangian_pair(L.re, L.im, r_.system, dom_, opts_.zero),
                                      "real EL equations of the split Lagrangian on-shell"));
  });
  if (r_.rcode) {
    guarded("rcode", [&] {
      Expr w = el_scalar(r_.lagrangian, dom_, opts_.zero).w;
      RealPair d = realify(w - *r_.rcode);
      std::vector<Expr> e{d.re, d.im};
      add("rcode", Verdict::from(all_zero(e, dom_, opts_.zero), "printed r-CODE vs EL equation of L"));
    });
  }
  if (r_.real_lagrangians) {
    guarded("printed-lagrangians", [&] {
      const auto& [L1, L2] = *r_.real_lagrangians;
      add("printed-lagrangians", Verdict::from(check_lagrangian_pair(L1, L2, r_.system, dom_, opts_.zero),
                                               "printed real pair is variational for the system"));
    });
  }
  if (r_.alt_lagrangian) {
    guarded("cauchy-riemann Lalt", [&] {
      add("cauchy-riemann Lalt", Verdict::from(check_cauchy_riemann(realify(*r_.alt_lagrangian), dom_, opts_.zero)));
    });
    guarded("alt-el-consistency", [&] {
      System2 expect = realify(el_scalar(*r_.alt_lagrangian, dom_, opts_.zero));
      std::vector<Expr> d{expect.w1 - r_.system.w1, expect.w2 - r_.system.w2};
      add("alt-el-consistency", Verdict::from(all_zero(d, dom_, opts_.zero), "alternative Lagrangian, same system"));
    });
  }
}

void Verifier::symmetries() {
  for (const auto& s : r_.symmetries) {
    if (s.classical) {
      std::string claim = "classical-noether " + s.name;
      guarded(claim, [&] {
        std::map<Sym, Expr> to_real{{Sym::u, sym::f()}};
        RealVectorField X{substitute(s.Z.xi, to_real), substitute(s.Z.eta, to_real), Expr(0)};
        std::optional<Expr> A;
        if (s.gauge) A = substitute(*s.gauge, to_real);
        else A = find_real_gauge(X, *r_.classical_lagrangian, dom_, default_real_gauge_basis(), opts_.zero).gauge;
        if (!A) {
          add(claim, s.reconstructed ? ClaimVerdict::Flagged : ClaimVerdict::Fail,
              "no gauge in the polynomial basis makes the condition a total derivative");
          return;
        }
        Verdict v = check_classical_noether(X, *r_.classical_lagrangian, *A, dom_, opts_.zero);
        v.detail = "gauge " + to_string(*A);
        add(claim, v, s.reconstructed);
      });
      continue;
    }
    std::string claim = "noether-like " + s.name;
    guarded(claim, [&] {
      const Expr& L = lagrangian_for(s);
      std::optional<Expr> A = s.gauge;
      if (!A) {
        auto g = find_gauge(s.Z, L, dom_, default_gauge_basis(), opts_.zero);
        if (!g.gauge) {
          add(claim, ClaimVerdict::Fail, "no gauge found: " + g.detail);
          return;
        }
        A = g.gauge;
      }
      RealPair Lr = realify(L);
      RealPair Ar = realify(*A);
      Verdict real_route = check_noether_like(split_symmetry(s.Z), Lr.re, Lr.im, {Ar.re, Ar.im}, dom_, opts_.zero);
      Verdict complex_route = check_noether_like(s.Z, L, *A, dom_, opts_.zero);
      Verdict v = real_route.pass ? complex_route : real_route;
      v.pass = real_route.pass && complex_route.pass;
      v.detail = "gauge " + to_string(*A);
      if (real_route.pass != complex_route.pass) v.detail += "; real-pair and complex routes disagree";
      add(claim, v, s.reconstructed);
    });
    if (s.gauge) {
      // Independent recovery of the stated gauge, up to an additive constant.
      std::string gclaim = "gauge-search " + s.name;
      guarded(gclaim, [&] {
        auto g = find_gauge(s.Z, lagrangian_for(s), dom_, default_gauge_basis(), opts_.zero);
        if (!g.gauge) {
          add(gclaim, ClaimVerdict::Info, "not in the polynomial search basis");
          return;
        }
        Expr d = *g.gauge - *s.gauge;
        RealPair dr = realify(free_total_derivative(d));
        std::vector<Expr> e{dr.re, dr.im};
        bool same = all_zero(e, dom_, opts_.zero).zero;
        add(gclaim, same ? ClaimVerdict::Pass : ClaimVerdict::Fail, "found " + to_string(*g.gauge));
      });
    }
  }
}

void Verifier::operators() {
  guarded("operator-count", [&] {
    int n = operator_count(r_);
    add("operator-count", n == r_.expected_operators ? ClaimVerdict::Pass : ClaimVerdict::Fail,
        std::to_string(n) + (r_.count_complex ? " complex symmetries" : " Noether-like operators") + ", expected " +
            std::to_string(r_.expected_operators));
  });
  if (!r_.operators.empty()) {
    guarded("operators-match-split", [&] {
      auto split = split_operators(r_);
      std::vector<std::string> missing;
      std::vector<bool> used(split.size(), false);
      for (const auto& op : r_.operators) {
        if (op.extra) continue;
        bool found = false;
        for (std::size_t k = 0; k < split.size(); ++k) {
          if (proportional(op.X, split[k].field, dom_, opts_.zero)) {
            used[k] = true;
            found = true;
          }
        }
        if (!found) missing.push_back(op.name);
      }
      for (std::size_t k = 0; k < split.size(); ++k) {
        if (!used[k]) missing.push_back(split[k].name);
      }
      std::string detail = missing.empty() ? "printed operators equal the split operators up to scalars" : "unmatched:";
      for (const auto& m : missing) detail += " " + m;
      add("operators-match-split", missing.empty() ? ClaimVerdict::Pass : ClaimVerdict::Fail, detail);
    });
  }
  for (const auto& op : r_.operators) {
    std::string claim = "lie " + op.name;
    guarded(claim, [&] {
      Verdict v = check_lie_symmetry(op.X, r_.system, dom_, opts_.zero);
      std::string what = v.pass ? "Lie condition holds" : "Lie condition fails";
      if (!op.expect_lie) {
        add(claim, ClaimVerdict::Info, what + " (reported, not asserted)");
      } else if (*op.expect_lie == v.pass) {
        add(claim, v.pass ? ClaimVerdict::Pass : ClaimVerdict::ExpectedFail, what + (v.pass ? "" : " (expected)"));
      } else {
        Claim& c = add(claim, ClaimVerdict::Fail, what + ", expected the opposite");
        c.witness = v.witness;
      }
    });
  }
}

std::optional<std::pair<Rational, int>> Verifier::generator_scale(const Expr& I, const IntegralPair& J) {
  // I - s*J_m has no dependence on (x, f, g, f', g') for some rational s.
  const Sym vars[] = {Sym::x, Sym::f, Sym::g, Sym::df, Sym::dg};
  for (int m = 0; m < 2; ++m) {
    const Expr& Jm = m == 0 ? J.I1 : J.I2;
    std::vector<Expr> roots;
    for (Sym v : vars) roots.push_back(diff(I, v));
    for (Sym v : vars) roots.push_back(diff(Jm, v));
    SymSet needed;
    for (const auto& e : roots) needed |= e.symbols();
    auto pts = sample_points(dom_, opts_.zero, needed);
    CompiledExpr code(roots);
    std::vector<double> val(roots.size());
    double num = 0, den = 0;
    for (const auto& p : pts) {
      if (!code.evaluate(p, val).ok) continue;
      for (int k = 0; k < 5; ++k) {
        num += val[static_cast<std::size_t>(k)] * val[static_cast<std::size_t>(k + 5)];
        den += val[static_cast<std::size_t>(k + 5)] * val[static_cast<std::size_t>(k + 5)];
      }
    }
    if (den == 0.0) continue;
    auto s = snap_rational(num / den, 720, 1e-6);
    if (!s || *s == Rational(0)) continue;
    std::vector<Expr> d;
    for (Sym v : vars) d.push_back(diff(I - Expr(*s) * Jm, v));
    if (all_zero(d, dom_, opts_.zero).zero) return std::make_pair(*s, m);
  }
  return std::nullopt;
}

double Verifier::drift_of(const IntegralPair& I, std::string& error) {
  if (!traj_) {
    error = traj_error_;
    return std::nan("");
  }
  try {
    auto d = drift(I, *traj_);
    return std::max(d[0], d[1]);
  } catch (const Error& e) {
    error = e.what();
    return std::nan("");
  }
}

void Verifier::integrals() {
  if (r_.trajectory) {
    try {
      traj_ = integrate_trajectory(r_.system, r_.trajectory->start, r_.trajectory->T, r_.trajectory->step,
                                   r_.trajectory->guards);
    } catch (const Error& e) {
      traj_error_ = e.what();
    }
  }
  for (const auto& ci : r_.integrals) {
    const std::string base = "integral " + ci.name;
    bool reading_on_shell = false;
    guarded(base + " on-shell", [&] {
      Verdict v = verify_on_shell(ci.reading, r_.system, dom_, opts_.zero);
      reading_on_shell = v.pass;
      if (ci.corrected) v.detail += ci.printed ? " (corrected reading)" : " (reconstructed reading)";
      add(base + " on-shell", v);
    });
    if (ci.printed && ci.corrected) {
      guarded(base + " printed", [&] {
        Verdict v = verify_on_shell(*ci.printed, r_.system, dom_, opts_.zero);
        v.detail = v.pass ? "printed formula is conserved" : "printed formula is not conserved";
        if (!ci.note.empty()) v.detail += "; " + ci.note;
        add(base + " printed", v, true);
      });
    }
    const CatalogSymmetry* sym = ci.symmetry.empty() ? nullptr : find_symmetry(r_, ci.symmetry);
    if (sym && !sym->classical) {
      guarded(base + " generator", [&] {
        std::optional<Expr> A = sym->gauge;
        if (!A) A = find_gauge(sym->Z, lagrangian_for(*sym), dom_, default_gauge_basis(), opts_.zero).gauge;
        if (!A) {
          add(base + " generator", ClaimVerdict::Fail, "no gauge for " + sym->name);
          return;
        }
        IntegralPair J = noether_integral(sym->Z, lagrangian_for(*sym), *A);
        auto s1 = generator_scale(ci.reading.I1, J);
        auto s2 = generator_scale(ci.reading.I2, J);
        std::string detail;
        auto describe = [](const std::optional<std::pair<Rational, int>>& s) {
          return s ? to_string(s->first) + "*J" + std::to_string(s->second + 1) : std::string("none");
        };
        detail = "I1 = " + describe(s1) + " + c, I2 = " + describe(s2) + " + c, J from " + sym->name;
        add(base + " generator", s1 && s2 ? ClaimVerdict::Pass : ClaimVerdict::Fail, detail);
      });
      guarded(base + " coupled", [&] {
        Verdict v = verify_coupled_relations(ci.reading, split_symmetry(sym->Z), dom_, opts_.zero);
        if (r_.coupled_required) {
          add(base + " coupled", v);
        } else {
          add(base + " coupled", ClaimVerdict::Info, v.detail + " (reported, not asserted)");
        }
      });
    }
    if (r_.trajectory) {
      std::string err;
      double d = drift_of(ci.reading, err);
      bool ok = std::isfinite(d) && d <= opts_.drift_tol;
      Claim& c = add(base + " drift", ok ? ClaimVerdict::Pass : ClaimVerdict::Fail,
                     err.empty() ? "relative drift on the reference trajectory" : err);
      if (std::isfinite(d)) c.drift = d;
      add(base + " oracle-agreement", reading_on_shell == ok ? ClaimVerdict::Pass : ClaimVerdict::Fail,
          std::string("on-shell ") + (reading_on_shell ? "pass" : "fail") + ", drift " + (ok ? "within" : "beyond") +
              " tolerance");
      if (ci.printed && ci.corrected) {
        std::string perr;
        double pd = drift_of(*ci.printed, perr);
        bool pok = std::isfinite(pd) && pd <= opts_.drift_tol;
        Claim& pc = add(base + " printed-drift", ClaimVerdict::Info,
                        perr.empty() ? (pok ? "printed formula stays within tolerance"
                                            : "printed formula drifts beyond tolerance")
                                     : perr);
        if (std::isfinite(pd)) pc.drift = pd;
      }
    }
  }
}

void Verifier::algebras() {
  for (const auto& a : r_.algebras) {
    const std::string base = "algebra " + a.name;
    guarded(base + " closure", [&] {
      std::vector<NamedField> ops;
      for (const auto& n : a.basis) ops.push_back({n, find_operator(r_, n)->X});
      AlgebraTable t = structure_constants(ops, dom_, opts_.zero);
      std::string detail = t.closed ? "closed" : "not closed:";
      for (const auto& res : t.residuals) detail += " " + t.format(res.i, res.j) + ";";
      bool expected = !a.closed || *a.closed == t.closed;
      add(base + " closure", expected ? ClaimVerdict::Pass : ClaimVerdict::Fail, detail);
      if (!a.printed.empty()) {
        std::vector<PrintedBracket> printed;
        for (const auto& line : a.printed) printed.push_back(parse_printed_bracket(line, a.basis));
        auto diffs = compare_with_printed(t, printed);
        std::string d = diffs.empty() ? "matches the printed table" : "";
        for (const auto& s : diffs) d += (d.empty() ? "" : "; ") + s;
        add(base + " table", diffs.empty() ? ClaimVerdict::Pass : (a.exact ? ClaimVerdict::Fail : ClaimVerdict::Info),
            d);
      }
      if (t.closed) {
        add(base + " jacobi", check_jacobi(t) ? ClaimVerdict::Pass : ClaimVerdict::Fail, "exact rational check");
      }
      if (a.residual) {
        bool ok = t.residuals.size() == 1 && proportional(t.residuals[0].field, find_operator(r_, *a.residual)->X,
                                                          dom_, opts_.zero);
        add(base + " residual", ok ? ClaimVerdict::Pass : ClaimVerdict::Fail,
            ok ? "the non-spanned bracket is " + *a.residual : "residual differs from " + *a.residual);
      }
    });
  }
}

void Verifier::independence() {
  if (!r_.independent_integrals) return;
  guarded("independent-integrals", [&] {
    std::vector<Expr> comps;
    for (const auto& ci : r_.integrals) {
      comps.push_back(ci.reading.I1);
      comps.push_back(ci.reading.I2);
    }
    SymSet needed;
    for (const auto& e : comps) needed |= e.symbols();
    ZeroTestOptions o = opts_.zero;
    o.trials = static_cast<int>(3 * comps.size());
    auto pts = sample_points(dom_, o, needed);
    CompiledExpr code(comps);
    Eigen::MatrixXd M(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(comps.size()));
    std::vector<double> v(comps.size());
    for (std::size_t p = 0; p < pts.size(); ++p) {
      code.evaluate(pts[p], v);
      for (std::size_t k = 0; k < comps.size(); ++k) M(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(k)) = v[k];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& s = svd.singularValues();
    int rank = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
      if (s(k) > 1e-9 * s(0)) ++rank;
    }
    add("independent-integrals", rank == *r_.independent_integrals ? ClaimVerdict::Pass : ClaimVerdict::Fail,
        std::to_string(rank) + " linearly independent components out of " + std::to_string(comps.size()));
  });
}

RecordReport Verifier::run() {
  lagrangians();
  symmetries();
  operators();
  integrals();
  algebras();
  independence();
  return std::move(report_);
}

}  // namespace

RecordReport verify_record(const CatalogRecord& r, const VerifyOptions& opts) { return Verifier(r, opts).run(); }

std::string report_json(const std::vector<RecordReport>& reports) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& rep : reports) {
    for (const auto& c : rep.claims) {
      nlohmann::ordered_json j;
      j["record"] = rep.record;
      j["claim"] = c.claim;
      j["verdict"] = to_string(c.verdict);
      if (!c.detail.empty()) j["detail"] = c.detail;
      if (c.witness) j["witness"] = point_to_string(*c.witness);
      if (c.drift) j["drift"] = *c.drift;
      out.push_back(std::move(j));
    }
  }
  return out.dump(2) + "\n";
}

std::string report_text(const std::vector<RecordReport>& reports) {
  std::ostringstream os;
  for (const auto& rep : reports) {
    for (const auto& c : rep.claims) {
      os << rep.record << "\t" << c.claim << "\t" << to_string(c.verdict);
      if (!c.detail.empty()) os << "\t" << c.detail;
      if (c.drift) os << "\tdrift=" << *c.drift;
      if (c.witness) os << "\tat " << point_to_string(*c.witness);
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace noetherkit
