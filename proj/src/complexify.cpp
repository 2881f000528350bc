#include "noetherkit/complexify.hpp"

#include <functional>
#include <unordered_map>

#include "noetherkit/calculus.hpp"

namespace noetherkit {

namespace {

bool real(const RealPair& z) { return z.im.is_zero(); }

RealPair mul(const RealPair& a, const RealPair& b) {
  if (real(a) && real(b)) return {a.re * b.re, Expr(0)};
  if (real(a)) return {a.re * b.re, a.re * b.im};
  if (real(b)) return {a.re * b.re, a.im * b.re};
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

RealPair int_power(RealPair z, std::int64_t n) {
  RealPair result{Expr(1), Expr(0)};
  while (n > 0) {
    if (n & 1) result = mul(result, z);
    n >>= 1;
    if (n > 0) z = mul(z, z);
  }
  return result;
}

RealPair power(const RealPair& z, const Rational& r) {
  if (real(z)) return {make_power(z.re, r), Expr(0)};
  if (r.denominator() == 1) {
    std::int64_t n = r.numerator();
    if (n >= 0) return int_power(z, n);
    // z^-n = conj(z)^n / |z|^(2n)
    RealPair num = int_power({z.re, -z.im}, -n);
    Expr scale = make_power(z.re * z.re + z.im * z.im, Rational(n));
    return {num.re * scale, num.im * scale};
  }
  Expr modulus = make_power(z.re * z.re + z.im * z.im, r / 2);
  Expr angle = Expr(r) * atan2(z.im, z.re);
  return {modulus * cos(angle), modulus * sin(angle)};
}

}  // namespace

RealPair realify(const Expr& e) {
  std::unordered_map<const Node*, RealPair> memo;
  std::function<RealPair(const Expr&)> go = [&](const Expr& t) -> RealPair {
    if (auto it = memo.find(t.id()); it != memo.end()) return it->second;
    RealPair out;
    switch (t.kind()) {
      case Kind::Rational:
        out = {t, Expr(0)};
        break;
      case Kind::Const:
        out = t.sym() == Sym::i ? RealPair{Expr(0), Expr(1)} : RealPair{t, Expr(0)};
        break;
      case Kind::Var:
        switch (t.sym()) {
          case Sym::x: out = {t, Expr(0)}; break;
          case Sym::u: out = {sym::f(), sym::g()}; break;
          case Sym::du: out = {sym::df(), sym::dg()}; break;
          case Sym::ddu: out = {sym::ddf(), sym::ddg()}; break;
          default:
            throw ContextError("realify: expects a complex-side expression, found '" +
                               std::string(sym_name(t.sym())) + "'");
        }
        break;
      case Kind::Sum: {
        std::vector<Expr> re;
        std::vector<Expr> im;
        for (const auto& c : t.children()) {
          RealPair p = go(c);
          re.push_back(p.re);
          im.push_back(p.im);
        }
        out = {make_sum(std::move(re)), make_sum(std::move(im))};
        break;
      }
      case Kind::Product: {
        out = {Expr(1), Expr(0)};
        for (const auto& c : t.children()) out = mul(out, go(c));
        break;
      }
      case Kind::Power:
        out = power(go(t.base()), t.exponent());
        break;
      case Kind::Exp: {
        RealPair a = go(t.arg());
        if (real(a)) {
          out = {exp(a.re), Expr(0)};
        } else {
          Expr m = exp(a.re);
          out = {m * cos(a.im), m * sin(a.im)};
        }
        break;
      }
      case Kind::Log: {
        RealPair a = go(t.arg());
        if (real(a)) {
          out = {log(a.re), Expr(0)};
        } else {
          out = {Expr(Rational(1, 2)) * log(a.re * a.re + a.im * a.im), atan2(a.im, a.re)};
        }
        break;
      }
      case Kind::Sin: {
        RealPair a = go(t.arg());
        if (real(a)) {
          out = {sin(a.re), Expr(0)};
        } else {
          out = {sin(a.re) * cosh(a.im), cos(a.re) * sinh(a.im)};
        }
        break;
      }
      case Kind::Cos: {
        RealPair a = go(t.arg());
        if (real(a)) {
          out = {cos(a.re), Expr(0)};
        } else {
          out = {cos(a.re) * cosh(a.im), -(sin(a.re) * sinh(a.im))};
        }
        break;
      }
      case Kind::Sinh: {
        RealPair a = go(t.arg());
        if (real(a)) {
          out = {sinh(a.re), Expr(0)};
        } else {
          out = {sinh(a.re) * cos(a.im), cosh(a.re) * sin(a.im)};
        }
        break;
      }
      case Kind::Cosh: {
        RealPair a = go(t.arg());
        if (real(a)) {
          out = {cosh(a.re), Expr(0)};
        } else {
          out = {cosh(a.re) * cos(a.im), sinh(a.re) * sin(a.im)};
        }
        break;
      }
      case Kind::Atan: {
        RealPair z = go(t.arg());
        if (real(z)) {
          out = {atan(z.re), Expr(0)};
        } else {
          const Expr& a = z.re;
          const Expr& b = z.im;
          Expr one(1);
          out = {Expr(Rational(1, 2)) * atan2(2 * a, one - a * a - b * b),
                 Expr(Rational(1, 4)) *
                     log((a * a + (one + b) * (one + b)) / (a * a + (one - b) * (one - b)))};
        }
        break;
      }
      case Kind::Atan2: {
        RealPair y = go(t.children()[0]);
        RealPair x = go(t.children()[1]);
        if (!real(y) || !real(x)) throw UnsupportedError("realify: atan2 has no complex-analytic extension");
        out = {atan2(y.re, x.re), Expr(0)};
        break;
      }
    }
    memo.emplace(t.id(), out);
    return out;
  };
  return go(e);
}

std::vector<Expr> cauchy_riemann_residuals(const RealPair& p) {
  VarContext::real_jet().require(p.re, "Cauchy-Riemann check");
  VarContext::real_jet().require(p.im, "Cauchy-Riemann check");
  return {
      diff(p.re, Sym::f) - diff(p.im, Sym::g),
      diff(p.re, Sym::g) + diff(p.im, Sym::f),
      diff(p.re, Sym::df) - diff(p.im, Sym::dg),
      diff(p.re, Sym::dg) + diff(p.im, Sym::df),
  };
}

ZeroTestResult check_cauchy_riemann(const RealPair& p, const SampleDomain& dom, const ZeroTestOptions& opts) {
  auto residuals = cauchy_riemann_residuals(p);
  return all_zero(residuals, dom, opts);
}

}  // namespace noetherkit
