#include "noetherkit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "noetherkit/catalog.hpp"

namespace noetherkit::cli {
namespace {

using json = nlohmann::ordered_json;

/// Bad input that is not a module error: missing keys, unknown names, bad numbers.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Settings {
  ZeroTestOptions zero;
  SampleDomain dom = SampleDomain::defaults();
  std::optional<std::uint64_t> seed;
  bool json = false;
};

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string caret(const std::string& text, int column) {
  return "\n  " + text + "\n  " + std::string(static_cast<std::size_t>(std::max(column - 1, 0)), ' ') + "^";
}

Expr parse_arg(const std::string& text, const std::string& what) {
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw UsageError(what + ": " + e.what() + caret(text, e.column()));
  }
}

/// Splits at separators outside parentheses.
std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

double parse_number(const std::string& text, const std::string& what) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || trim(text.substr(pos)) != "") throw UsageError(what + ": not a number: '" + text + "'");
  return v;
}

std::uint64_t parse_seed(const std::string& text, const std::string& what) {
  std::size_t pos = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(text, &pos, 0);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size()) throw UsageError(what + ": not an integer seed: '" + text + "'");
  return v;
}

Sym parse_symbol(const std::string& name, const std::string& what) {
  auto s = sym_from_name(trim(name));
  if (!s || !(is_variable(*s) || is_parameter(*s))) throw UsageError(what + ": unknown symbol '" + name + "'");
  return *s;
}

// "x=0.5:2,f=1:2"
void apply_domain(SampleDomain& dom, const std::string& spec) {
  for (const auto& item : split_top(spec, ',')) {
    auto eq = item.find('=');
    auto colon = item.find(':');
    if (eq == std::string::npos || colon == std::string::npos || colon < eq) {
      throw UsageError("--domain: expected sym=lo:hi, got '" + item + "'");
    }
    Sym s = parse_symbol(item.substr(0, eq), "--domain");
    double lo = parse_number(trim(item.substr(eq + 1, colon - eq - 1)), "--domain");
    double hi = parse_number(trim(item.substr(colon + 1)), "--domain");
    if (!(lo < hi)) throw UsageError("--domain: empty interval for " + std::string(sym_name(s)));
    dom.set(s, lo, hi);
  }
}

// ---- definition files: "key = expr" lines, '#' comments ----

struct Def {
  std::string key;
  std::string value;
  int line = 0;
  int column = 0;
};

std::vector<Def> read_defs(const std::string& path, const std::string& bare_key) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::vector<Def> defs;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::string line = raw.substr(0, raw.find('#'));
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    Def d;
    d.line = number;
    if (eq == std::string::npos) {
      d.key = bare_key;
      d.value = trim(line);
      d.column = static_cast<int>(line.find_first_not_of(" \t")) + 1;
    } else {
      d.key = trim(line.substr(0, eq));
      d.value = trim(line.substr(eq + 1));
      d.column = static_cast<int>(line.find(d.value, eq + 1)) + 1;
    }
    defs.push_back(d);
  }
  return defs;
}

Expr parse_def(const Def& d, const std::string& path) {
  try {
    return parse(d.value);
  } catch (const ParseError& e) {
    int col = d.column + e.column() - 1;
    throw UsageError(path + ":" + std::to_string(d.line) + ":" + std::to_string(col) + ": " + e.what() +
                     caret(d.value, e.column()));
  }
}

System2 read_system(const std::string& path) {
  std::optional<Expr> w1, w2, w;
  for (const auto& d : read_defs(path, "")) {
    if (d.key == "w1" || d.key == "ddf") {
      w1 = parse_def(d, path);
    } else if (d.key == "w2" || d.key == "ddg") {
      w2 = parse_def(d, path);
    } else if (d.key == "w" || d.key == "ddu") {
      w = parse_def(d, path);
    } else {
      throw UsageError(path + ":" + std::to_string(d.line) + ": expected ddf/ddg, w1/w2 or ddu, got '" + d.key + "'");
    }
  }
  if (w && !w1 && !w2) {
    VarContext::complex_jet().require(*w, "system");
    return realify(ScalarRCODE{*w});
  }
  if (w1 && w2 && !w) return {*w1, *w2};
  throw UsageError(path + ": give either ddu, or both ddf and ddg");
}

struct LagrangianFile {
  std::optional<Expr> L;
  std::optional<Expr> L1;
  std::optional<Expr> L2;
};

LagrangianFile read_lagrangian(const std::string& path) {
  LagrangianFile lf;
  for (const auto& d : read_defs(path, "L")) {
    if (d.key == "L") {
      lf.L = parse_def(d, path);
    } else if (d.key == "L1") {
      lf.L1 = parse_def(d, path);
    } else if (d.key == "L2") {
      lf.L2 = parse_def(d, path);
    } else {
      throw UsageError(path + ":" + std::to_string(d.line) + ": expected L, L1 or L2, got '" + d.key + "'");
    }
  }
  if (lf.L) VarContext::complex_jet().require(*lf.L, "Lagrangian");
  if (lf.L1.has_value() != lf.L2.has_value()) throw UsageError(path + ": give both L1 and L2");
  if (!lf.L && !lf.L1) throw UsageError(path + ": no Lagrangian found");
  return lf;
}

// ---- output helpers ----

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << v;
  return os.str();
}

void emit_failure(json& j, std::ostream& out, bool as_json, double worst, const std::optional<Point>& witness) {
  if (as_json) {
    j["worst"] = worst;
    if (witness) j["witness"] = point_to_string(*witness);
    return;
  }
  out << "worst: " << sci(worst) << "\n";
  if (witness) out << "witness: " << point_to_string(*witness) << "\n";
}

ComplexPointSymmetry parse_complex_symmetry(const std::string& text, const std::string& what) {
  auto parts = split_top(text, ',');
  if (parts.size() != 2) throw UsageError(what + ": expected 'xi,eta'");
  return {parse_arg(parts[0], what + " xi"), parse_arg(parts[1], what + " eta")};
}

// ---- verbs ----

int do_split(const Settings& s, const std::string& text, std::ostream& out) {
  Expr e = parse_arg(text, "expression");
  VarContext::complex_jet().require(e, "split");
  RealPair p = realify(e);
  if (s.json) {
    out << json{{"re", to_string(p.re)}, {"im", to_string(p.im)}}.dump(2) << "\n";
  } else {
    out << p.re << "\n" << p.im << "\n";
  }
  return kOk;
}

int do_el(const Settings& s, const std::vector<std::string>& exprs, bool pair, const std::string& system_file,
          std::ostream& out) {
  if (!pair) {
    if (exprs.size() != 1) throw UsageError("el: expected one Lagrangian (or --pair L1 L2)");
    ScalarRCODE r = el_scalar(parse_arg(exprs[0], "Lagrangian"), s.dom, s.zero);
    if (s.json) {
      out << json{{"ddu", to_string(r.w)}}.dump(2) << "\n";
    } else {
      out << "ddu = " << r.w << "\n";
    }
    return kOk;
  }
  if (exprs.size() != 2) throw UsageError("el --pair: expected two Lagrangians");
  Expr L1 = parse_arg(exprs[0], "L1"), L2 = parse_arg(exprs[1], "L2");
  VarContext::real_jet().require(L1, "L1");
  VarContext::real_jet().require(L2, "L2");
  bool derived = system_file.empty();
  System2 sys = derived ? el_system(L1) : read_system(system_file);
  auto residuals = el_residuals(L1, L2, sys);
  static const char* names[] = {"E_f L1", "E_g L1", "E_f L2", "E_g L2"};
  bool all = true;
  json j;
  if (derived) j["system"] = {{"ddf", to_string(sys.w1)}, {"ddg", to_string(sys.w2)}};
  json rows = json::array();
  if (!s.json && derived) out << "ddf = " << sys.w1 << "\nddg = " << sys.w2 << "\n";
  for (std::size_t k = 0; k < residuals.size(); ++k) {
    ZeroTestResult z = is_zero(residuals[k], s.dom, s.zero);
    all = all && z.zero;
    json row{{"residual", names[k]}, {"verdict", z.zero ? "zero" : "nonzero"}};
    if (s.json) {
      if (!z.zero) emit_failure(row, out, true, z.worst, z.witness);
      rows.push_back(row);
    } else {
      out << names[k] << "\t" << (z.zero ? "zero" : "nonzero");
      if (!z.zero) out << "\tworst=" << sci(z.worst) << (z.witness ? "\tat " + point_to_string(*z.witness) : "");
      out << "\n";
    }
  }
  if (s.json) {
    j["residuals"] = rows;
    j["verdict"] = all ? "pass" : "fail";
    out << j.dump(2) << "\n";
  } else {
    out << "lagrangians: " << (all ? "pass" : "fail") << "\n";
  }
  return all ? kOk : kVerificationFailed;
}

int do_noether_check(const Settings& s, const std::string& system_file, const std::string& lagrangian_file,
                     const std::string& op, const std::string& gauge_text, std::ostream& out) {
  LagrangianFile lf = read_lagrangian(lagrangian_file);
  std::optional<System2> sys;
  if (!system_file.empty()) sys = read_system(system_file);
  bool auto_gauge = gauge_text == "auto";
  auto parts = split_top(op, ',');
  json j;
  Verdict v;
  std::vector<NamedField> fields;

  if (parts.size() == 2) {
    ComplexPointSymmetry Z{parse_arg(parts[0], "--op xi"), parse_arg(parts[1], "--op eta")};
    OperatorPair pair = split_symmetry(Z);
    fields = {{"X1", pair.X1}, {"X2", pair.X2}};
    Expr A;
    if (auto_gauge) {
      if (!lf.L) throw UsageError("--gauge auto needs a complex Lagrangian L");
      GaugeSearch g = find_gauge(Z, *lf.L, s.dom, default_gauge_basis(), s.zero);
      if (!g.gauge) throw UsageError("no gauge found in the polynomial basis: " + g.detail);
      A = *g.gauge;
    } else {
      A = parse_arg(gauge_text, "--gauge");
    }
    j["gauge"] = to_string(A);
    if (lf.L) {
      v = check_noether_like(Z, *lf.L, A, s.dom, s.zero);
    } else {
      RealPair a = realify(A);
      v = check_noether_like(pair, *lf.L1, *lf.L2, GaugePair{a.re, a.im}, s.dom, s.zero);
    }
    j["condition"] = "noether-like";
  } else if (parts.size() == 3) {
    RealVectorField X{parse_arg(parts[0], "--op xi"), parse_arg(parts[1], "--op eta_f"),
                      parse_arg(parts[2], "--op eta_g")};
    fields = {{"X", X}};
    Expr L = lf.L1 ? *lf.L1 : realify(*lf.L).re;
    Expr A;
    if (auto_gauge) {
      GaugeSearch g = find_real_gauge(X, L, s.dom, default_real_gauge_basis(), s.zero);
      if (!g.gauge) throw UsageError("no gauge found in the polynomial basis: " + g.detail);
      A = *g.gauge;
    } else {
      A = parse_arg(gauge_text, "--gauge");
    }
    j["gauge"] = to_string(A);
    v = check_classical_noether(X, L, A, s.dom, s.zero);
    j["condition"] = "classical";
  } else {
    throw UsageError("--op: expected 'xi,eta' (complex) or 'xi,eta_f,eta_g' (real)");
  }

  j["verdict"] = v.pass ? "pass" : "fail";
  if (!s.json) {
    out << "gauge: " << j["gauge"].get<std::string>() << "\n";
    out << j["condition"].get<std::string>() << ": " << (v.pass ? "pass" : "fail") << "\n";
  }
  if (!v.pass) emit_failure(j, out, s.json, v.worst, v.witness);
  if (sys) {
    json lie = json::object();
    for (const auto& nf : fields) {
      Verdict lv = check_lie_symmetry(nf.field, *sys, s.dom, s.zero);
      lie[nf.name] = lv.pass ? "holds" : "fails";
      if (!s.json) out << "lie " << nf.name << ": " << (lv.pass ? "holds" : "fails") << "\n";
    }
    j["lie"] = lie;
  }
  if (s.json) out << j.dump(2) << "\n";
  return v.pass ? kOk : kVerificationFailed;
}

int do_integrals(const Settings& s, const std::string& symmetry, const std::string& lagrangian,
                 const std::string& gauge_text, const std::string& system_file, std::ostream& out) {
  ComplexPointSymmetry Z = parse_complex_symmetry(symmetry, "--symmetry");
  Expr L = parse_arg(lagrangian, "--lagrangian");
  Expr A;
  if (gauge_text == "auto") {
    GaugeSearch g = find_gauge(Z, L, s.dom, default_gauge_basis(), s.zero);
    if (!g.gauge) throw UsageError("no gauge found in the polynomial basis: " + g.detail);
    A = *g.gauge;
  } else {
    A = parse_arg(gauge_text, "--gauge");
  }
  IntegralPair I = noether_integral(Z, L, A);
  json j{{"gauge", to_string(A)}, {"I1", to_string(I.I1)}, {"I2", to_string(I.I2)}};
  if (!s.json) out << "I1 = " << I.I1 << "\nI2 = " << I.I2 << "\n";
  int code = kOk;
  if (!system_file.empty()) {
    Verdict v = verify_on_shell(I, read_system(system_file), s.dom, s.zero);
    j["on_shell"] = v.pass ? "pass" : "fail";
    if (!s.json) out << "on-shell: " << (v.pass ? "pass" : "fail") << "\n";
    if (!v.pass) {
      emit_failure(j, out, s.json, v.worst, v.witness);
      code = kVerificationFailed;
    }
  }
  if (s.json) out << j.dump(2) << "\n";
  return code;
}

// "X1 = xi ; eta_f ; eta_g" per line
std::vector<NamedField> read_operators(const std::string& path) {
  std::vector<NamedField> ops;
  for (const auto& d : read_defs(path, "")) {
    if (d.key.empty()) throw UsageError(path + ":" + std::to_string(d.line) + ": expected 'name = xi ; eta_f ; eta_g'");
    auto parts = split_top(d.value, ';');
    if (parts.size() != 3) {
      throw UsageError(path + ":" + std::to_string(d.line) + ": expected three components separated by ';'");
    }
    std::vector<Expr> c;
    for (const auto& p : parts) {
      Def sub = d;
      sub.value = p;
      sub.column = d.column + static_cast<int>(d.value.find(p));
      c.push_back(parse_def(sub, path));
    }
    ops.push_back({d.key, RealVectorField{c[0], c[1], c[2]}});
  }
  if (ops.empty()) throw UsageError(path + ": no operators");
  return ops;
}

int do_bracket(const Settings& s, const std::string& ops_file, std::ostream& out) {
  auto ops = read_operators(ops_file);
  AlgebraTable t = structure_constants(ops, s.dom, s.zero);
  json rows = json::array();
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      if (s.json) {
        rows.push_back(t.format(i, j));
      } else {
        out << t.format(i, j) << "\n";
      }
    }
  }
  std::optional<bool> jacobi;
  if (t.closed) jacobi = check_jacobi(t);
  if (s.json) {
    json j{{"rows", rows}, {"closed", t.closed}};
    if (jacobi) j["jacobi"] = *jacobi;
    out << j.dump(2) << "\n";
  } else {
    out << "closed: " << (t.closed ? "yes" : "no") << "\n";
    if (jacobi) out << "jacobi: " << (*jacobi ? "holds" : "fails") << "\n";
  }
  return jacobi.value_or(true) ? kOk : kVerificationFailed;
}

int do_trajectory(const Settings& s, const std::string& catalog, const std::string& record,
                  std::optional<double> T, std::optional<double> step, double drift_tol, std::ostream& out,
                  std::ostream& err) {
  LoadOptions lo;
  lo.zero = s.zero;
  auto records = load_catalog(catalog, lo);
  const CatalogRecord& r = find_record(records, record);
  if (!r.trajectory) throw UsageError("record '" + record + "' has no reference trajectory");
  const CatalogTrajectory& ct = *r.trajectory;
  double t_end = T.value_or(ct.T), h = step.value_or(ct.step);
  if (!(t_end > 0) || !(h > 0)) throw UsageError("--T and --step must be positive");
  Trajectory traj;
  try {
    traj = integrate_trajectory(r.system, ct.start, t_end, h, ct.guards);
  } catch (const TrajectoryError& e) {
    err << "trajectory: " << e.what() << " (last good x = " << num(e.last_good_x()) << ")\n";
    return kVerificationFailed;
  }
  bool all = true;
  json rows = json::array();
  if (!s.json) out << "integral\tdrift\tverdict\n";
  for (const auto& ci : r.integrals) {
    auto d = drift(ci.reading, traj);
    for (int k = 0; k < 2; ++k) {
      std::string name = ci.name + "/I" + std::to_string(k + 1);
      bool ok = std::isfinite(d[k]) && d[k] <= drift_tol;
      all = all && ok;
      if (s.json) {
        rows.push_back({{"integral", name}, {"drift", d[k]}, {"verdict", ok ? "pass" : "fail"}});
      } else {
        out << name << "\t" << sci(d[k]) << "\t" << (ok ? "pass" : "fail") << "\n";
      }
    }
  }
  if (s.json) out << rows.dump(2) << "\n";
  return all ? kOk : kVerificationFailed;
}

int do_verify_catalog(const Settings& s, const std::string& catalog, const std::string& record, double drift_tol,
                      std::ostream& out) {
  LoadOptions lo;
  lo.zero = s.zero;
  auto records = load_catalog(catalog, lo);
  VerifyOptions vo;
  vo.zero = s.zero;
  vo.seed = s.seed;
  vo.drift_tol = drift_tol;
  std::vector<RecordReport> reports;
  if (!record.empty()) {
    reports.push_back(verify_record(find_record(records, record), vo));
  } else {
    for (const auto& r : records) reports.push_back(verify_record(r, vo));
  }
  out << (s.json ? report_json(reports) + "\n" : report_text(reports));
  bool ok = std::all_of(reports.begin(), reports.end(), [](const RecordReport& r) { return r.ok(); });
  return ok ? kOk : kVerificationFailed;
}

int do_eval(const Settings& s, const std::string& text, const std::string& at, std::ostream& out) {
  Expr e = parse_arg(text, "expression");
  Point p;
  if (!at.empty()) {
    for (const auto& item : split_top(at, ',')) {
      auto eq = item.find('=');
      if (eq == std::string::npos) throw UsageError("--at: expected sym=value, got '" + item + "'");
      p.set(parse_symbol(item.substr(0, eq), "--at"), parse_number(trim(item.substr(eq + 1)), "--at"));
    }
  }
  bool complex = jet_of(e) == Jet::Complex;
  if (complex) {
    RealPair rp = realify(e);
    double re = eval(rp.re, p), im = eval(rp.im, p);
    if (s.json) {
      out << json{{"re", re}, {"im", im}}.dump(2) << "\n";
    } else {
      out << num(re) << "\n" << num(im) << "\n";
    }
  } else {
    double v = eval(e, p);
    if (s.json) {
      out << json{{"value", v}}.dump(2) << "\n";
    } else {
      out << num(v) << "\n";
    }
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Complex Lagrangian splitting, Noether-like operators and first integrals", "noetherkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string seed_text, domain_text;
  Settings s;
  app.add_option("--seed", seed_text, "Sampling seed (overrides NOETHERKIT_SEED)");
  app.add_option("--tol", s.zero.tol, "Zero-test tolerance")->check(CLI::PositiveNumber);
  app.add_option("--trials", s.zero.trials, "Zero-test sample count")->check(CLI::PositiveNumber);
  app.add_option("--domain", domain_text, "Sampling intervals, e.g. x=0.5:2,f=1:2");
  app.add_flag("--json", s.json, "JSON output");

  std::string expr_text;
  auto* split = app.add_subcommand("split", "Real and imaginary parts of an analytic expression");
  split->add_option("expr", expr_text, "Expression in x, u, du")->required();

  std::vector<std::string> el_exprs;
  bool el_pair = false;
  std::string system_file;
  auto* el = app.add_subcommand("el", "Euler-Lagrange equation of a complex Lagrangian");
  el->add_option("lagrangians", el_exprs, "L, or L1 L2 with --pair")->required();
  el->add_flag("--pair", el_pair, "Check a real Lagrangian pair");
  el->add_option("--system", system_file, "System file (default: derived from L1)");

  std::string lagrangian_file, op_text, gauge_text = "0";
  auto* nc = app.add_subcommand("noether-check", "Check a Noether-like or classical Noether condition");
  nc->add_option("--system", system_file, "System file, for Lie checks");
  nc->add_option("--lagrangian", lagrangian_file, "Lagrangian file (L, or L1 and L2)")->required();
  nc->add_option("--op", op_text, "xi,eta (complex) or xi,eta_f,eta_g (real)")->required();
  nc->add_option("--gauge", gauge_text, "Gauge expression or 'auto'");

  std::string symmetry_text, lagrangian_text;
  auto* ints = app.add_subcommand("integrals", "First-integral pair of a complex symmetry");
  ints->add_option("--symmetry", symmetry_text, "xi,eta")->required();
  ints->add_option("--lagrangian", lagrangian_text, "Complex Lagrangian")->required();
  ints->add_option("--gauge", gauge_text, "Gauge expression or 'auto'");
  ints->add_option("--system", system_file, "System file, for an on-shell check");

  std::string ops_file;
  auto* br = app.add_subcommand("bracket", "Structure constants of an operator set");
  br->add_option("--ops", ops_file, "Operator file")->required();

  std::string catalog = default_catalog_dir(), record;
  std::optional<double> t_end, step;
  double drift_tol = 1e-6;
  auto* tr = app.add_subcommand("trajectory", "Integral drift along a record's reference trajectory");
  tr->add_option("--record", record, "Record name")->required();
  tr->add_option("--T", t_end, "Window length");
  tr->add_option("--step", step, "RK4 step");
  tr->add_option("--catalog", catalog, "Catalog directory or file");
  tr->add_option("--drift-tol", drift_tol, "Relative drift threshold");

  auto* vc = app.add_subcommand("verify-catalog", "Re-verify every claim in the catalog");
  vc->add_option("--record", record, "Only this record");
  vc->add_option("--catalog", catalog, "Catalog directory or file");
  vc->add_option("--drift-tol", drift_tol, "Relative drift threshold");

  std::string at_text;
  auto* ev = app.add_subcommand("eval", "Evaluate an expression at a point");
  ev->add_option("expr", expr_text, "Expression")->required();
  ev->add_option("--at", at_text, "Values, e.g. x=1,f=2,g=0.5");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (const char* env = std::getenv("NOETHERKIT_SEED"); env && *env) s.seed = parse_seed(env, "NOETHERKIT_SEED");
    if (!seed_text.empty()) s.seed = parse_seed(seed_text, "--seed");
    if (s.seed) s.dom.seed = *s.seed;
    if (!domain_text.empty()) apply_domain(s.dom, domain_text);

    if (*split) return do_split(s, expr_text, out);
    if (*el) return do_el(s, el_exprs, el_pair, system_file, out);
    if (*nc) return do_noether_check(s, system_file, lagrangian_file, op_text, gauge_text, out);
    if (*ints) return do_integrals(s, symmetry_text, lagrangian_text, gauge_text, system_file, out);
    if (*br) return do_bracket(s, ops_file, out);
    if (*tr) return do_trajectory(s, catalog, record, t_end, step, drift_tol, out, err);
    if (*vc) return do_verify_catalog(s, catalog, record, drift_tol, out);
    if (*ev) return do_eval(s, expr_text, at_text, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace noetherkit::cli
