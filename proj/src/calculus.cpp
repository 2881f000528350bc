#include "noetherkit/calculus.hpp"

#include <functional>
#include <unordered_map>

namespace noetherkit {

Expr diff(const Expr& e, Sym v) {
  if (!is_variable(v)) {
    throw ContextError("cannot differentiate with respect to constant '" + std::string(sym_name(v)) + "'");
  }
  std::unordered_map<const Node*, Expr> memo;
  std::function<Expr(const Expr&)> go = [&](const Expr& t) -> Expr {
    if (!t.depends_on(v)) return Expr(0);
    if (auto it = memo.find(t.id()); it != memo.end()) return it->second;
    Expr out;
    switch (t.kind()) {
      case Kind::Var:
        out = Expr(1);
        break;
      case Kind::Sum: {
        std::vector<Expr> terms;
        for (const auto& c : t.children()) terms.push_back(go(c));
        out = make_sum(std::move(terms));
        break;
      }
      case Kind::Product: {
        auto ch = t.children();
        std::vector<Expr> terms;
        for (std::size_t k = 0; k < ch.size(); ++k) {
          Expr dk = go(ch[k]);
          if (dk.is_zero()) continue;
          std::vector<Expr> fs;
          fs.reserve(ch.size());
          for (std::size_t j = 0; j < ch.size(); ++j) fs.push_back(j == k ? dk : ch[j]);
          terms.push_back(make_product(std::move(fs)));
        }
        out = make_sum(std::move(terms));
        break;
      }
      case Kind::Power: {
        const Rational& r = t.exponent();
        out = make_product({Expr(r), make_power(t.base(), r - 1), go(t.base())});
        break;
      }
      case Kind::Exp:
        out = t * go(t.arg());
        break;
      case Kind::Log:
        out = go(t.arg()) / t.arg();
        break;
      case Kind::Sin:
        out = cos(t.arg()) * go(t.arg());
        break;
      case Kind::Cos:
        out = -(sin(t.arg()) * go(t.arg()));
        break;
      case Kind::Sinh:
        out = cosh(t.arg()) * go(t.arg());
        break;
      case Kind::Cosh:
        out = sinh(t.arg()) * go(t.arg());
        break;
      case Kind::Atan: {
        const Expr& a = t.arg();
        out = go(a) / (Expr(1) + a * a);
        break;
      }
      case Kind::Atan2: {
        const Expr& y = t.children()[0];
        const Expr& x = t.children()[1];
        out = (x * go(y) - y * go(x)) / (x * x + y * y);
        break;
      }
      default:
        out = Expr(0);
        break;
    }
    memo.emplace(t.id(), out);
    return out;
  };
  return go(e);
}

Expr diff(const Expr& e, std::string_view v) {
  auto s = sym_from_name(v);
  if (!s) throw ContextError("unknown variable '" + std::string(v) + "'");
  return diff(e, *s);
}

Jet jet_of(const Expr& e) {
  const auto& s = e.symbols();
  bool cx = s.test(index(Sym::u)) || s.test(index(Sym::du)) || s.test(index(Sym::ddu));
  bool re = s.test(index(Sym::f)) || s.test(index(Sym::g)) || s.test(index(Sym::df)) ||
            s.test(index(Sym::dg)) || s.test(index(Sym::ddf)) || s.test(index(Sym::ddg));
  if (cx && re) throw ContextError("expression mixes complex (u) and real (f, g) variables");
  if (cx) return Jet::Complex;
  if (re) return Jet::Real;
  return Jet::None;
}

namespace {

struct Chain {
  Sym q;
  Sym dq;
  Sym ddq;
};

std::vector<Chain> chains_for(Jet jet) {
  if (jet == Jet::Complex) return {{Sym::u, Sym::du, Sym::ddu}};
  if (jet == Jet::Real) return {{Sym::f, Sym::df, Sym::ddf}, {Sym::g, Sym::dg, Sym::ddg}};
  return {};
}

Jet jet_of_rhs(const Substitution& rhs) {
  bool cx = rhs.count(Sym::ddu) > 0;
  bool re = rhs.count(Sym::ddf) > 0 || rhs.count(Sym::ddg) > 0;
  if (cx && !re) return Jet::Complex;
  if (re && !cx) return Jet::Real;
  return Jet::None;
}

}  // namespace

Expr total_derivative(const Expr& e, const Substitution& rhs) {
  for (const auto& [s, _] : rhs) {
    if (s != Sym::ddu && s != Sym::ddf && s != Sym::ddg) {
      throw ContextError("total_derivative: rhs key '" + std::string(sym_name(s)) +
                         "' is not a second-derivative symbol");
    }
  }
  Jet jet = jet_of(e);
  if (jet == Jet::None) jet = jet_of_rhs(rhs);
  for (Sym s : {Sym::ddu, Sym::ddf, Sym::ddg}) {
    if (e.depends_on(s)) {
      throw ContextError("total_derivative: expression already contains '" + std::string(sym_name(s)) + "'");
    }
  }
  std::vector<Expr> terms{diff(e, Sym::x)};
  for (const auto& c : chains_for(jet)) {
    terms.push_back(Expr::symbol(c.dq) * diff(e, c.q));
    Expr ep = diff(e, c.dq);
    if (ep.is_zero()) continue;
    auto it = rhs.find(c.ddq);
    if (it == rhs.end()) {
      throw ContextError("total_derivative: missing rhs for '" + std::string(sym_name(c.ddq)) + "'");
    }
    jet_of(make_sum({e, it->second}));  // rejects a rhs from the other jet
    terms.push_back(it->second * ep);
  }
  return make_sum(std::move(terms));
}

Expr free_total_derivative(const Expr& e) {
  Jet jet = jet_of(e);
  for (Sym s : {Sym::du, Sym::ddu, Sym::df, Sym::dg, Sym::ddf, Sym::ddg}) {
    if (e.depends_on(s)) {
      throw ContextError("free_total_derivative: expects a base-point expression, found '" +
                         std::string(sym_name(s)) + "'");
    }
  }
  std::vector<Expr> terms{diff(e, Sym::x)};
  for (const auto& c : chains_for(jet)) terms.push_back(Expr::symbol(c.dq) * diff(e, c.q));
  return make_sum(std::move(terms));
}

}  // namespace noetherkit
