#include <ostream>
#include <sstream>

#include "noetherkit/expr.hpp"

namespace noetherkit {

namespace {

// Binding strength of the printed form; a child printed below the strength
// its parent requires gets parentheses.
enum Prec : int { kSum = 1, kProduct = 2, kPower = 3, kAtom = 4 };

struct Printed {
  std::string text;
  int prec;
};

Printed print(const Expr& e);

std::string wrap(const Printed& p, int need) {
  if (p.prec < need) return "(" + p.text + ")";
  return p.text;
}

Printed print_rational(const Rational& r) {
  std::string s = to_string(r);
  if (r.denominator() != 1 || r < 0) return {s, kProduct};
  return {s, kAtom};
}

bool negative_term(const Expr& t) {
  auto [c, rest] = split_coefficient(t);
  return c < 0;
}

Printed print_sum(const Expr& e) {
  // Constant term goes last to read naturally.
  std::vector<Expr> terms;
  const Expr* constant = nullptr;
  for (const auto& t : e.children()) {
    if (t.is_rational()) {
      constant = &t;
    } else {
      terms.push_back(t);
    }
  }
  if (constant) terms.push_back(*constant);
  std::string out;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const Expr& t = terms[k];
    if (k == 0) {
      out += wrap(print(t), kSum);
      continue;
    }
    if (negative_term(t)) {
      out += " - " + wrap(print(-t), kProduct);
    } else {
      out += " + " + wrap(print(t), kProduct);
    }
  }
  return {out, kSum};
}

Printed print_product(const Expr& e) {
  auto [c, rest] = split_coefficient(e);
  std::vector<std::string> num;
  std::vector<std::string> den;
  std::int64_t cn = c.numerator() < 0 ? -c.numerator() : c.numerator();
  if (cn != 1) num.push_back(std::to_string(cn));
  if (c.denominator() != 1) den.push_back(std::to_string(c.denominator()));
  std::vector<Expr> factors;
  if (rest.kind() == Kind::Product) {
    factors.assign(rest.children().begin(), rest.children().end());
  } else {
    factors.push_back(rest);
  }
  for (const auto& f : factors) {
    if (f.kind() == Kind::Power && f.exponent() < 0) {
      den.push_back(wrap(print(make_power(f.base(), -f.exponent())), den.empty() ? kPower : kProduct));
    } else {
      num.push_back(wrap(print(f), kPower));
    }
  }
  std::string out = c < 0 ? "-" : "";
  if (num.empty()) {
    out += "1";
  } else {
    for (std::size_t k = 0; k < num.size(); ++k) out += (k ? "*" : "") + num[k];
  }
  if (den.size() == 1) {
    out += "/" + den.front();
  } else if (den.size() > 1) {
    out += "/(";
    for (std::size_t k = 0; k < den.size(); ++k) out += (k ? "*" : "") + den[k];
    out += ")";
  }
  return {out, kProduct};
}

Printed print_power(const Expr& e) {
  const Rational& r = e.exponent();
  if (r < 0) {
    return {"1/" + wrap(print(make_power(e.base(), -r)), kPower), kProduct};
  }
  std::string base = wrap(print(e.base()), kAtom);
  if (r.denominator() == 1) return {base + "^" + std::to_string(r.numerator()), kPower};
  return {base + "^(" + to_string(r) + ")", kPower};
}

Printed print(const Expr& e) {
  switch (e.kind()) {
    case Kind::Rational:
      return print_rational(e.value());
    case Kind::Const:
    case Kind::Var:
      return {std::string(sym_name(e.sym())), kAtom};
    case Kind::Sum:
      return print_sum(e);
    case Kind::Product:
      return print_product(e);
    case Kind::Power:
      return print_power(e);
    case Kind::Atan2:
      return {"atan2(" + print(e.children()[0]).text + ", " + print(e.children()[1]).text + ")", kAtom};
    default:
      return {std::string(kind_name(e.kind())) + "(" + print(e.arg()).text + ")", kAtom};
  }
}

}  // namespace

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string to_string(const Expr& e) { return print(e).text; }

}  // namespace noetherkit
