#include "noetherkit/liealg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <sstream>

namespace noetherkit {

namespace {

using Mono = std::array<int, 3>;
using Poly = std::map<Mono, Rational>;

void add_into(Poly& p, const Poly& q, const Rational& scale = Rational(1)) {
  for (const auto& [m, c] : q) {
    Rational& slot = p[m];
    slot += scale * c;
    if (slot == Rational(0)) p.erase(m);
  }
}

Poly multiply(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      Mono m{ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]};
      Rational& slot = out[m];
      slot += ca * cb;
      if (slot == Rational(0)) out.erase(m);
    }
  }
  return out;
}

// Polynomial in (x, f, g) with rational coefficients, if e is one.
std::optional<Poly> to_poly(const Expr& e) {
  switch (e.kind()) {
    case Kind::Rational: {
      Poly p;
      if (e.value() != Rational(0)) p[{0, 0, 0}] = e.value();
      return p;
    }
    case Kind::Var: {
      Mono m{0, 0, 0};
      switch (e.sym()) {
        case Sym::x: m[0] = 1; break;
        case Sym::f: m[1] = 1; break;
        case Sym::g: m[2] = 1; break;
        default: return std::nullopt;
      }
      return Poly{{m, Rational(1)}};
    }
    case Kind::Sum: {
      Poly p;
      for (const auto& c : e.children()) {
        auto q = to_poly(c);
        if (!q) return std::nullopt;
        add_into(p, *q);
      }
      return p;
    }
    case Kind::Product: {
      Poly p{{Mono{0, 0, 0}, Rational(1)}};
      for (const auto& c : e.children()) {
        auto q = to_poly(c);
        if (!q) return std::nullopt;
        p = multiply(p, *q);
      }
      return p;
    }
    case Kind::Power: {
      const Rational n = e.exponent();
      if (n.denominator() != 1 || n < Rational(0)) return std::nullopt;
      auto b = to_poly(e.base());
      if (!b) return std::nullopt;
      Poly p{{Mono{0, 0, 0}, Rational(1)}};
      for (std::int64_t k = 0; k < n.numerator(); ++k) p = multiply(p, *b);
      return p;
    }
    default:
      return std::nullopt;
  }
}

std::optional<std::array<Poly, 3>> field_poly(const RealVectorField& X) {
  auto a = to_poly(X.xi);
  auto b = to_poly(X.eta_f);
  auto c = to_poly(X.eta_g);
  if (!a || !b || !c) return std::nullopt;
  return std::array<Poly, 3>{*a, *b, *c};
}

using QMatrix = std::vector<std::vector<Rational>>;

// Row-reduces [A | b] in place; returns the rank of A and whether the system
// is consistent. On a consistent full-column-rank system, x holds the solution.
struct Elimination {
  std::size_t rank = 0;
  bool consistent = true;
  std::vector<Rational> x;
};

Elimination eliminate(QMatrix A, std::vector<Rational> b, std::size_t cols) {
  Elimination out;
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < A.size(); ++c) {
    std::size_t p = row;
    while (p < A.size() && A[p][c] == Rational(0)) ++p;
    if (p == A.size()) continue;
    std::swap(A[p], A[row]);
    std::swap(b[p], b[row]);
    Rational inv = Rational(1) / A[row][c];
    for (std::size_t k = c; k < cols; ++k) A[row][k] *= inv;
    b[row] *= inv;
    for (std::size_t r = 0; r < A.size(); ++r) {
      if (r == row || A[r][c] == Rational(0)) continue;
      Rational s = A[r][c];
      for (std::size_t k = c; k < cols; ++k) A[r][k] -= s * A[row][k];
      b[r] -= s * b[row];
    }
    pivot_col.push_back(c);
    ++row;
  }
  out.rank = row;
  for (std::size_t r = row; r < A.size(); ++r) {
    if (b[r] != Rational(0)) out.consistent = false;
  }
  out.x.assign(cols, Rational(0));
  for (std::size_t r = 0; r < row; ++r) out.x[pivot_col[r]] = b[r];
  return out;
}

// Monomial-matching system: one row per (component, monomial).
void build_exact(const std::vector<std::array<Poly, 3>>& basis, const std::array<Poly, 3>& target, QMatrix& A,
                 std::vector<Rational>& b) {
  const std::size_t n = basis.size();
  for (int k = 0; k < 3; ++k) {
    std::map<Mono, std::size_t> rows;
    auto row_of = [&](const Mono& m) {
      auto [it, fresh] = rows.emplace(m, A.size());
      if (fresh) {
        A.emplace_back(n, Rational(0));
        b.emplace_back(0);
      }
      return it->second;
    };
    for (std::size_t l = 0; l < n; ++l) {
      for (const auto& [m, c] : basis[l][k]) A[row_of(m)][l] = c;
    }
    for (const auto& [m, c] : target[k]) b[row_of(m)] = c;
  }
}

RealVectorField combine(const std::vector<RealVectorField>& basis, const std::vector<Rational>& c) {
  std::vector<Expr> xi, ef, eg;
  for (std::size_t l = 0; l < basis.size(); ++l) {
    if (c[l] == Rational(0)) continue;
    Expr s(c[l]);
    xi.push_back(s * basis[l].xi);
    ef.push_back(s * basis[l].eta_f);
    eg.push_back(s * basis[l].eta_g);
  }
  return {make_sum(xi), make_sum(ef), make_sum(eg)};
}

std::vector<Expr> components(const RealVectorField& X) { return {X.xi, X.eta_f, X.eta_g}; }

SymSet needed_symbols(const std::vector<RealVectorField>& fields) {
  SymSet s;
  s.set(index(Sym::x));
  s.set(index(Sym::f));
  s.set(index(Sym::g));
  for (const auto& X : fields) s |= X.xi.symbols() | X.eta_f.symbols() | X.eta_g.symbols();
  return s;
}

Eigen::MatrixXd sampled_matrix(const std::vector<RealVectorField>& basis, const std::vector<Point>& pts) {
  std::vector<Expr> roots;
  for (const auto& X : basis) {
    for (const auto& c : components(X)) roots.push_back(c);
  }
  CompiledExpr code(roots);
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd M(static_cast<Eigen::Index>(pts.size()) * 3, n);
  std::vector<double> v(roots.size());
  for (std::size_t p = 0; p < pts.size(); ++p) {
    code.evaluate(pts[p], v);
    for (Eigen::Index l = 0; l < n; ++l) {
      for (int k = 0; k < 3; ++k) M(static_cast<Eigen::Index>(3 * p + k), l) = v[static_cast<std::size_t>(3 * l + k)];
    }
  }
  return M;
}

Eigen::Index numeric_rank(const Eigen::MatrixXd& M) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Eigen::Index r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) > 1e-9 * s(0)) ++r;
  }
  return r;
}

void check_independent(const std::vector<NamedField>& ops, const std::vector<RealVectorField>& basis,
                       const std::optional<std::vector<std::array<Poly, 3>>>& polys, const SampleDomain& dom,
                       const ZeroTestOptions& opts) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  SymSet needed = needed_symbols(basis);
  for (int attempt = 0; attempt < 2; ++attempt) {
    SampleDomain d = dom;
    d.seed = dom.seed + 0x51ED * static_cast<std::uint64_t>(attempt);
    ZeroTestOptions o = opts;
    o.trials = static_cast<int>(3 * n);
    if (numeric_rank(sampled_matrix(basis, sample_points(d, o, needed))) == n) return;
  }
  if (polys) {
    QMatrix A;
    std::vector<Rational> b;
    build_exact(*polys, {}, A, b);
    if (eliminate(A, b, basis.size()).rank == basis.size()) return;
  }
  std::string names;
  for (const auto& op : ops) names += (names.empty() ? "" : ", ") + op.name;
  throw DependentBasisError("operators are linearly dependent: " + names);
}

std::string format_coeff_term(const Rational& c, const std::string& what, bool first) {
  std::string out;
  Rational a = c < Rational(0) ? -c : c;
  if (first) {
    if (c < Rational(0)) out += "-";
  } else {
    out += c < Rational(0) ? " - " : " + ";
  }
  if (a != Rational(1)) out += to_string(a) + "*";
  return out + what;
}

}  // namespace

Expr apply(const RealVectorField& X, const Expr& h) {
  return make_sum({X.xi * diff(h, Sym::x), X.eta_f * diff(h, Sym::f), X.eta_g * diff(h, Sym::g)});
}

RealVectorField lie_bracket(const RealVectorField& X, const RealVectorField& Y) {
  return {apply(X, Y.xi) - apply(Y, X.xi), apply(X, Y.eta_f) - apply(Y, X.eta_f),
          apply(X, Y.eta_g) - apply(Y, X.eta_g)};
}

std::string to_string(const RealVectorField& X) {
  std::string out;
  const std::pair<const Expr*, const char*> parts[] = {{&X.xi, "d/dx"}, {&X.eta_f, "d/df"}, {&X.eta_g, "d/dg"}};
  for (const auto& [c, d] : parts) {
    if (c->is_zero()) continue;
    auto [k, rest] = split_coefficient(*c);
    std::string body;
    if (rest == Expr(1)) {
      body = d;
    } else {
      std::string r = to_string(rest);
      body = (rest.kind() == Kind::Sum ? "(" + r + ")" : r) + "*" + d;
    }
    out += format_coeff_term(k, body, out.empty());
  }
  return out.empty() ? "0" : out;
}

void AlgebraTable::set_constants(std::size_t i, std::size_t j, const std::vector<Rational>& v) {
  entries[i][j].spanned = true;
  entries[i][j].coeffs = v;
  entries[j][i].spanned = true;
  entries[j][i].coeffs.resize(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) entries[j][i].coeffs[k] = -v[k];
}

std::string AlgebraTable::format(std::size_t i, std::size_t j) const {
  std::string lhs = "[" + names[i] + "," + names[j] + "] = ";
  const Entry& e = entries[i][j];
  if (!e.spanned) return lhs + to_string(e.bracket) + " (not in span)";
  std::string rhs;
  for (std::size_t k = 0; k < e.coeffs.size(); ++k) {
    if (e.coeffs[k] != Rational(0)) rhs += format_coeff_term(e.coeffs[k], names[k], rhs.empty());
  }
  return lhs + (rhs.empty() ? "0" : rhs);
}

AlgebraTable structure_constants(const std::vector<NamedField>& ops, const SampleDomain& dom,
                                 const ZeroTestOptions& opts) {
  if (ops.empty()) throw Error("structure_constants: empty operator list");
  AlgebraTable t;
  const std::size_t n = ops.size();
  for (const auto& op : ops) {
    VarContext::real_base().require(op.field.xi, op.name);
    VarContext::real_base().require(op.field.eta_f, op.name);
    VarContext::real_base().require(op.field.eta_g, op.name);
    t.names.push_back(op.name);
    t.basis.push_back(op.field);
  }
  std::optional<std::vector<std::array<Poly, 3>>> polys(std::in_place);
  for (const auto& X : t.basis) {
    auto p = field_poly(X);
    if (!p) {
      polys.reset();
      break;
    }
    polys->push_back(*p);
  }
  check_independent(ops, t.basis, polys, dom, opts);

  t.entries.assign(n, std::vector<AlgebraTable::Entry>(n));
  for (std::size_t i = 0; i < n; ++i) {
    t.entries[i][i].spanned = true;
    t.entries[i][i].coeffs.assign(n, Rational(0));
    t.entries[i][i].bracket = {Expr(0), Expr(0), Expr(0)};
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      RealVectorField B = lie_bracket(t.basis[i], t.basis[j]);
      t.entries[i][j].bracket = B;
      t.entries[j][i].bracket = {-B.xi, -B.eta_f, -B.eta_g};
      std::optional<std::vector<Rational>> coeffs;
      bool decided = false;
      if (polys) {
        if (auto bp = field_poly(B)) {
          QMatrix A;
          std::vector<Rational> rhs;
          build_exact(*polys, *bp, A, rhs);
          auto el = eliminate(A, rhs, n);
          if (el.consistent) coeffs = el.x;
          decided = true;
        }
      }
      if (!decided) {
        t.exact = false;
        SymSet needed = needed_symbols(t.basis) | needed_symbols({B});
        ZeroTestOptions o = opts;
        o.trials = static_cast<int>(3 * n + 6);
        auto pts = sample_points(dom, o, needed);
        Eigen::MatrixXd M = sampled_matrix(t.basis, pts);
        Eigen::MatrixXd rb = sampled_matrix({B}, pts);
        Eigen::VectorXd c = M.completeOrthogonalDecomposition().solve(rb.col(0));
        std::vector<Rational> snapped;
        for (Eigen::Index k = 0; k < c.size(); ++k) {
          auto q = snap_rational(c(k), 720, 1e-6);
          if (!q) break;
          snapped.push_back(*q);
        }
        if (snapped.size() == n) {
          RealVectorField S = combine(t.basis, snapped);
          std::vector<Expr> r{B.xi - S.xi, B.eta_f - S.eta_f, B.eta_g - S.eta_g};
          if (all_zero(r, dom, opts).zero) coeffs = snapped;
        }
      }
      if (coeffs) {
        t.set_constants(i, j, *coeffs);
      } else {
        t.closed = false;
        t.residuals.push_back({i, j, B});
      }
    }
  }
  return t;
}

bool check_jacobi(const AlgebraTable& t) {
  if (!t.closed) return false;
  const std::size_t n = t.size();
  auto c = [&](std::size_t a, std::size_t b, std::size_t m) { return t.entries[a][b].coeffs[m]; };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
          Rational s(0);
          for (std::size_t m = 0; m < n; ++m) {
            s += c(i, j, m) * c(m, k, l) + c(j, k, m) * c(m, i, l) + c(k, i, m) * c(m, j, l);
          }
          if (s != Rational(0)) return false;
        }
      }
    }
  }
  return true;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::size_t name_index(const std::string& name, const std::vector<std::string>& names, const std::string& text) {
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (names[k] == name) return k;
  }
  throw Error("unknown operator '" + name + "' in '" + text + "'");
}

}  // namespace

std::vector<Rational> parse_combination(const std::string& text, const std::vector<std::string>& names) {
  std::vector<Rational> out(names.size(), Rational(0));
  std::string s = trim(text);
  if (s == "0") return out;
  std::size_t pos = 0;
  bool first = true;
  while (pos < s.size()) {
    while (pos < s.size() && s[pos] == ' ') ++pos;
    if (pos >= s.size()) break;
    Rational sign(1);
    if (s[pos] == '+' || s[pos] == '-') {
      if (s[pos] == '-') sign = Rational(-1);
      ++pos;
    } else if (!first) {
      throw Error("expected '+' or '-' in '" + text + "'");
    }
    while (pos < s.size() && s[pos] == ' ') ++pos;
    Rational coeff(1);
    if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      std::size_t end = pos;
      while (end < s.size() && (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '/')) ++end;
      std::string num = s.substr(pos, end - pos);
      std::size_t slash = num.find('/');
      coeff = slash == std::string::npos ? Rational(std::stoll(num))
                                         : Rational(std::stoll(num.substr(0, slash)), std::stoll(num.substr(slash + 1)));
      pos = end;
      while (pos < s.size() && s[pos] == ' ') ++pos;
      if (pos < s.size() && s[pos] == '*') ++pos;
      while (pos < s.size() && s[pos] == ' ') ++pos;
    }
    std::size_t end = pos;
    while (end < s.size() && (std::isalnum(static_cast<unsigned char>(s[end])) || s[end] == '_')) ++end;
    if (end == pos) throw Error("expected operator name in '" + text + "'");
    out[name_index(s.substr(pos, end - pos), names, text)] += sign * coeff;
    pos = end;
    first = false;
  }
  return out;
}

PrintedBracket parse_printed_bracket(const std::string& text, const std::vector<std::string>& names) {
  std::size_t open = text.find('[');
  std::size_t comma = text.find(',', open);
  std::size_t close = text.find(']', comma);
  std::size_t eq = text.find('=', close);
  if (open == std::string::npos || comma == std::string::npos || close == std::string::npos ||
      eq == std::string::npos) {
    throw Error("malformed bracket entry '" + text + "'");
  }
  PrintedBracket p;
  p.i = name_index(trim(text.substr(open + 1, comma - open - 1)), names, text);
  p.j = name_index(trim(text.substr(comma + 1, close - comma - 1)), names, text);
  p.coeffs = parse_combination(text.substr(eq + 1), names);
  return p;
}

std::vector<std::string> compare_with_printed(const AlgebraTable& t, const std::vector<PrintedBracket>& printed) {
  std::vector<std::string> out;
  const std::size_t n = t.size();
  std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
  for (const auto& p : printed) {
    seen[p.i][p.j] = seen[p.j][p.i] = true;
    AlgebraTable shown = t;
    shown.set_constants(p.i, p.j, p.coeffs);
    const auto& e = t.entries[p.i][p.j];
    if (!e.spanned || e.coeffs != p.coeffs) {
      out.push_back("printed " + shown.format(p.i, p.j) + ", computed " + t.format(p.i, p.j));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (seen[i][j]) continue;
      const auto& e = t.entries[i][j];
      bool zero = e.spanned && std::all_of(e.coeffs.begin(), e.coeffs.end(), [](const Rational& r) { return r == Rational(0); });
      if (!zero) out.push_back("not printed, computed " + t.format(i, j));
    }
  }
  return out;
}

}  // namespace noetherkit
