#include "noetherkit/expr.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <functional>
#include <ostream>
#include <unordered_map>

namespace noetherkit {

namespace {

constexpr std::array<std::string_view, kSymCount> kSymNames = {
    "x", "u", "du", "ddu", "f", "g", "df", "dg", "ddf", "ddg", "A", "b", "pi", "i"};

std::size_t mix(std::size_t seed, std::size_t v) {
  // boost::hash_combine with a 64-bit constant
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_rational(const Rational& r) {
  return mix(std::hash<std::int64_t>{}(r.numerator()), std::hash<std::int64_t>{}(r.denominator()));
}

bool is_integer(const Rational& r) { return r.denominator() == 1; }

// Exact a^n for integer n; throws on overflow.
Rational rational_pow(Rational a, std::int64_t n) {
  if (n < 0) {
    if (a == Rational(0)) throw SingularityError("zero raised to a negative power", "0");
    a = Rational(1) / a;
    n = -n;
  }
  Rational result(1);
  while (n > 0) {
    if (n & 1) result *= a;
    n >>= 1;
    if (n > 0) a *= a;
  }
  return result;
}

std::optional<std::int64_t> exact_root(std::int64_t v, std::int64_t q) {
  if (v < 0 || q <= 0) return std::nullopt;
  if (v == 0 || v == 1) return v;
  auto guess = static_cast<std::int64_t>(std::llround(std::pow(static_cast<double>(v), 1.0 / q)));
  for (std::int64_t c = std::max<std::int64_t>(0, guess - 1); c <= guess + 1; ++c) {
    std::int64_t p = 1;
    bool overflow = false;
    for (std::int64_t k = 0; k < q; ++k) {
      if (c != 0 && p > INT64_MAX / c) {
        overflow = true;
        break;
      }
      p *= c;
    }
    if (!overflow && p == v) return c;
  }
  return std::nullopt;
}

int kind_rank(Kind k) { return static_cast<int>(k); }

const Expr& zero_expr() {
  static const Expr z{Rational(0)};
  return z;
}

}  // namespace

std::string_view sym_name(Sym s) { return kSymNames[index(s)]; }

std::optional<Sym> sym_from_name(std::string_view name) {
  for (std::size_t k = 0; k < kSymCount; ++k) {
    if (kSymNames[k] == name) return static_cast<Sym>(k);
  }
  return std::nullopt;
}

std::string_view kind_name(Kind k) {
  switch (k) {
    case Kind::Rational: return "rational";
    case Kind::Const: return "const";
    case Kind::Var: return "var";
    case Kind::Sum: return "sum";
    case Kind::Product: return "product";
    case Kind::Power: return "power";
    case Kind::Exp: return "exp";
    case Kind::Log: return "log";
    case Kind::Sin: return "sin";
    case Kind::Cos: return "cos";
    case Kind::Sinh: return "sinh";
    case Kind::Cosh: return "cosh";
    case Kind::Atan: return "atan";
    case Kind::Atan2: return "atan2";
  }
  return "?";
}

Expr make_node(Kind kind, Sym s, Rational value, std::vector<Expr> children) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->sym = s;
  node->value = value;
  std::size_t h = mix(0x51ed270b27a3c6d1ULL, static_cast<std::size_t>(kind));
  SymSet symbols;
  std::size_t size = 1;
  switch (kind) {
    case Kind::Rational:
      h = mix(h, hash_rational(value));
      break;
    case Kind::Const:
    case Kind::Var:
      h = mix(h, index(s));
      symbols.set(index(s));
      break;
    case Kind::Power:
      h = mix(h, hash_rational(value));
      break;
    default:
      break;
  }
  for (const auto& c : children) {
    h = mix(h, c.hash());
    symbols |= c.symbols();
    size += c.tree_size();
  }
  node->children = std::move(children);
  node->hash = h;
  node->symbols = symbols;
  node->size = size;
  return Expr(std::shared_ptr<const Node>(std::move(node)));
}

Expr::Expr() : Expr(Rational(0)) {}
Expr::Expr(int value) : Expr(Rational(value)) {}
Expr::Expr(Rational value) : node_(make_node(Kind::Rational, Sym::x, value, {}).node_) {}

Expr Expr::symbol(Sym s) {
  static const auto table = [] {
    std::array<Expr, kSymCount> t;
    for (std::size_t k = 0; k < kSymCount; ++k) {
      auto sy = static_cast<Sym>(k);
      t[k] = make_node(is_variable(sy) ? Kind::Var : Kind::Const, sy, Rational(0), {});
    }
    return t;
  }();
  return table[index(s)];
}

Kind Expr::kind() const { return node_->kind; }
bool Expr::is_zero() const { return node_->kind == Kind::Rational && node_->value == Rational(0); }
bool Expr::is_one() const { return node_->kind == Kind::Rational && node_->value == Rational(1); }

const Rational& Expr::value() const {
  assert(node_->kind == Kind::Rational);
  return node_->value;
}
Sym Expr::sym() const {
  assert(node_->kind == Kind::Var || node_->kind == Kind::Const);
  return node_->sym;
}
std::span<const Expr> Expr::children() const { return node_->children; }
const Expr& Expr::base() const {
  assert(node_->kind == Kind::Power);
  return node_->children[0];
}
const Rational& Expr::exponent() const {
  assert(node_->kind == Kind::Power);
  return node_->value;
}
const Expr& Expr::arg() const {
  assert(!node_->children.empty());
  return node_->children[0];
}
std::size_t Expr::hash() const { return node_->hash; }
const SymSet& Expr::symbols() const { return node_->symbols; }
std::size_t Expr::tree_size() const { return node_->size; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const Node& x = *a.node_;
  const Node& y = *b.node_;
  if (x.hash != y.hash || x.kind != y.kind || x.size != y.size) return false;
  if (x.sym != y.sym || x.value != y.value) return false;
  if (x.children.size() != y.children.size()) return false;
  for (std::size_t k = 0; k < x.children.size(); ++k) {
    if (!(x.children[k] == y.children[k])) return false;
  }
  return true;
}

int compare(const Expr& a, const Expr& b) {
  if (a.id() == b.id()) return 0;
  if (a.kind() != b.kind()) return kind_rank(a.kind()) < kind_rank(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case Kind::Rational:
      if (a.value() == b.value()) return 0;
      return a.value() < b.value() ? -1 : 1;
    case Kind::Const:
    case Kind::Var:
      if (a.sym() == b.sym()) return 0;
      return index(a.sym()) < index(b.sym()) ? -1 : 1;
    case Kind::Power: {
      int c = compare(a.base(), b.base());
      if (c != 0) return c;
      if (a.exponent() == b.exponent()) return 0;
      return a.exponent() < b.exponent() ? -1 : 1;
    }
    default: {
      auto ca = a.children();
      auto cb = b.children();
      // Compare from the most significant (last) child so that sums and
      // products order by their leading structure rather than coefficients.
      std::size_t n = std::min(ca.size(), cb.size());
      for (std::size_t k = 1; k <= n; ++k) {
        int c = compare(ca[ca.size() - k], cb[cb.size() - k]);
        if (c != 0) return c;
      }
      if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
      return 0;
    }
  }
}

std::pair<Rational, Expr> split_coefficient(const Expr& e) {
  if (e.kind() == Kind::Rational) return {e.value(), Expr(1)};
  if (e.kind() != Kind::Product) return {Rational(1), e};
  auto ch = e.children();
  if (ch.front().kind() != Kind::Rational) return {Rational(1), e};
  if (ch.size() == 2) return {ch.front().value(), ch[1]};
  std::vector<Expr> rest(ch.begin() + 1, ch.end());
  return {ch.front().value(), make_node(Kind::Product, Sym::x, Rational(0), std::move(rest))};
}

namespace {

// Builds c*rest where rest is already canonical and carries no coefficient.
Expr scale_raw(const Rational& c, const Expr& rest) {
  if (c == Rational(0)) return zero_expr();
  if (rest.is_one()) return Expr(c);
  if (c == Rational(1)) return rest;
  std::vector<Expr> ch;
  ch.emplace_back(c);
  if (rest.kind() == Kind::Product) {
    ch.insert(ch.end(), rest.children().begin(), rest.children().end());
  } else {
    ch.push_back(rest);
  }
  return make_node(Kind::Product, Sym::x, Rational(0), std::move(ch));
}

struct Collected {
  Expr key;
  Rational weight;
};

// Small open-addressing helper: groups by structural equality.
class Collector {
 public:
  void add(const Expr& key, const Rational& w) {
    auto [it, inserted] = slot_.try_emplace(key, items_.size());
    if (inserted) {
      items_.push_back({key, w});
    } else {
      items_[it->second].weight += w;
    }
  }
  std::vector<Collected>& items() { return items_; }

 private:
  std::unordered_map<Expr, std::size_t, ExprHash> slot_;
  std::vector<Collected> items_;
};

void flatten_sum(const Expr& t, Rational& constant, Collector& col) {
  if (t.kind() == Kind::Sum) {
    for (const auto& c : t.children()) flatten_sum(c, constant, col);
    return;
  }
  if (t.kind() == Kind::Rational) {
    constant += t.value();
    return;
  }
  auto [c, rest] = split_coefficient(t);
  col.add(rest, c);
}

void flatten_product(const Expr& t, Rational& coeff, Collector& col) {
  if (t.kind() == Kind::Product) {
    for (const auto& c : t.children()) flatten_product(c, coeff, col);
    return;
  }
  if (t.kind() == Kind::Rational) {
    coeff *= t.value();
    return;
  }
  if (t.kind() == Kind::Power) {
    col.add(t.base(), t.exponent());
    return;
  }
  col.add(t, Rational(1));
}

bool less_expr(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

}  // namespace

Expr make_sum(std::vector<Expr> terms) {
  Rational constant(0);
  Collector col;
  for (const auto& t : terms) flatten_sum(t, constant, col);
  std::vector<Expr> out;
  out.reserve(col.items().size() + 1);
  for (auto& item : col.items()) {
    if (item.weight == Rational(0)) continue;
    out.push_back(scale_raw(item.weight, item.key));
  }
  if (constant != Rational(0)) out.emplace_back(constant);
  if (out.empty()) return zero_expr();
  if (out.size() == 1) return out.front();
  std::sort(out.begin(), out.end(), less_expr);
  return make_node(Kind::Sum, Sym::x, Rational(0), std::move(out));
}

Expr make_product(std::vector<Expr> factors) {
  Rational coeff(1);
  Collector col;
  for (const auto& t : factors) {
    if (t.is_zero()) return zero_expr();
    flatten_product(t, coeff, col);
  }
  std::vector<Expr> out;
  bool refold = false;
  for (auto& item : col.items()) {
    if (item.weight == Rational(0)) continue;
    Expr p = make_power(item.key, item.weight);
    if (p.kind() == Kind::Rational) {
      coeff *= p.value();
      continue;
    }
    if (p.kind() == Kind::Product) refold = true;
    out.push_back(std::move(p));
  }
  if (coeff == Rational(0)) return zero_expr();
  if (refold) {
    out.emplace_back(coeff);
    return make_product(std::move(out));
  }
  if (out.empty()) return Expr(coeff);
  if (out.size() == 1 && coeff == Rational(1)) return out.front();
  std::sort(out.begin(), out.end(), less_expr);
  if (coeff != Rational(1)) out.insert(out.begin(), Expr(coeff));
  return make_node(Kind::Product, Sym::x, Rational(0), std::move(out));
}

Expr make_power(const Expr& base, const Rational& r) {
  if (r == Rational(0)) return Expr(1);
  if (r == Rational(1)) return base;
  switch (base.kind()) {
    case Kind::Rational: {
      const Rational& v = base.value();
      if (is_integer(r)) {
        if (v == Rational(0) && r < 0) break;  // kept symbolic; evaluation reports it
        return Expr(rational_pow(v, r.numerator()));
      }
      if (v == Rational(1)) return Expr(1);
      if (v == Rational(0) && r > 0) return zero_expr();
      if (v > 0) {
        auto n = exact_root(v.numerator(), r.denominator());
        auto d = exact_root(v.denominator(), r.denominator());
        if (n && d) return Expr(rational_pow(Rational(*n, *d), r.numerator()));
      }
      break;
    }
    case Kind::Power:
      if (is_integer(r)) return make_power(base.base(), base.exponent() * r);
      break;
    case Kind::Product:
      if (is_integer(r)) {
        std::vector<Expr> fs;
        for (const auto& c : base.children()) fs.push_back(make_power(c, r));
        return make_product(std::move(fs));
      }
      break;
    default:
      break;
  }
  return make_node(Kind::Power, Sym::x, r, {base});
}

Expr make_unary(Kind kind, const Expr& a) {
  if (a.is_zero()) {
    switch (kind) {
      case Kind::Exp:
      case Kind::Cos:
      case Kind::Cosh:
        return Expr(1);
      case Kind::Sin:
      case Kind::Sinh:
      case Kind::Atan:
        return zero_expr();
      default:
        break;
    }
  }
  if (kind == Kind::Log && a.is_one()) return zero_expr();
  switch (kind) {
    case Kind::Exp:
    case Kind::Log:
    case Kind::Sin:
    case Kind::Cos:
    case Kind::Sinh:
    case Kind::Cosh:
    case Kind::Atan:
      return make_node(kind, Sym::x, Rational(0), {a});
    default:
      throw UnsupportedError("make_unary: not a unary function kind");
  }
}

Expr make_atan2(const Expr& y, const Expr& x) {
  if (y.is_zero() && x.is_rational() && x.value() > 0) return zero_expr();
  return make_node(Kind::Atan2, Sym::x, Rational(0), {y, x});
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return make_sum({a, b});
}
Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_zero()) return a;
  return make_sum({a, -b});
}
Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  return make_product({a, b});
}
Expr operator/(const Expr& a, const Expr& b) { return make_product({a, make_power(b, Rational(-1))}); }
Expr operator-(const Expr& a) { return make_product({Expr(-1), a}); }
Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

Expr pow(const Expr& base, const Rational& exponent) { return make_power(base, exponent); }
Expr sqrt(const Expr& e) { return make_power(e, Rational(1, 2)); }
Expr exp(const Expr& e) { return make_unary(Kind::Exp, e); }
Expr log(const Expr& e) { return make_unary(Kind::Log, e); }
Expr sin(const Expr& e) { return make_unary(Kind::Sin, e); }
Expr cos(const Expr& e) { return make_unary(Kind::Cos, e); }
Expr sinh(const Expr& e) { return make_unary(Kind::Sinh, e); }
Expr cosh(const Expr& e) { return make_unary(Kind::Cosh, e); }
Expr atan(const Expr& e) { return make_unary(Kind::Atan, e); }
Expr atan2(const Expr& y, const Expr& x) { return make_atan2(y, x); }

Expr substitute(const Expr& e, const std::map<Sym, Expr>& replacements) {
  SymSet touched;
  for (const auto& [s, _] : replacements) touched.set(index(s));
  std::unordered_map<const Node*, Expr> memo;
  std::function<Expr(const Expr&)> go = [&](const Expr& t) -> Expr {
    if ((t.symbols() & touched).none()) return t;
    if (auto it = memo.find(t.id()); it != memo.end()) return it->second;
    Expr out;
    switch (t.kind()) {
      case Kind::Var:
      case Kind::Const:
        out = replacements.at(t.sym());
        break;
      case Kind::Sum: {
        std::vector<Expr> ch;
        for (const auto& c : t.children()) ch.push_back(go(c));
        out = make_sum(std::move(ch));
        break;
      }
      case Kind::Product: {
        std::vector<Expr> ch;
        for (const auto& c : t.children()) ch.push_back(go(c));
        out = make_product(std::move(ch));
        break;
      }
      case Kind::Power:
        out = make_power(go(t.base()), t.exponent());
        break;
      case Kind::Atan2:
        out = make_atan2(go(t.children()[0]), go(t.children()[1]));
        break;
      default:
        out = make_unary(t.kind(), go(t.arg()));
        break;
    }
    memo.emplace(t.id(), out);
    return out;
  };
  return go(e);
}

VarContext::VarContext(std::initializer_list<Sym> names) : names_(names) {
  for (Sym s : names_) mask_.set(index(s));
}

const VarContext& VarContext::complex_jet() {
  static const VarContext c{Sym::x, Sym::u, Sym::du, Sym::ddu};
  return c;
}
const VarContext& VarContext::real_jet() {
  static const VarContext c{Sym::x, Sym::f, Sym::g, Sym::df, Sym::dg, Sym::ddf, Sym::ddg};
  return c;
}
const VarContext& VarContext::complex_base() {
  static const VarContext c{Sym::x, Sym::u};
  return c;
}
const VarContext& VarContext::real_base() {
  static const VarContext c{Sym::x, Sym::f, Sym::g};
  return c;
}

bool VarContext::covers(const Expr& e) const {
  for (std::size_t k = 0; k < kSymCount; ++k) {
    auto s = static_cast<Sym>(k);
    if (e.symbols().test(k) && is_variable(s) && !mask_.test(k)) return false;
  }
  return true;
}

std::string VarContext::describe() const {
  std::string out = "{";
  for (std::size_t k = 0; k < names_.size(); ++k) {
    if (k) out += ", ";
    out += sym_name(names_[k]);
  }
  return out + "}";
}

void VarContext::require(const Expr& e, std::string_view what) const {
  for (std::size_t k = 0; k < kSymCount; ++k) {
    auto s = static_cast<Sym>(k);
    if (e.symbols().test(k) && is_variable(s) && !mask_.test(k)) {
      throw ContextError(std::string(what) + ": variable '" + std::string(sym_name(s)) +
                         "' is outside the context " + describe());
    }
  }
}

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }

}  // namespace noetherkit
