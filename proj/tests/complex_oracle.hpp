#pragma once

#include <complex>
#include <random>
#include <stdexcept>

#include "noetherkit/expr.hpp"

namespace noetherkit::testing {

using cplx = std::complex<double>;

struct ComplexPoint {
  double x;
  cplx u;
  cplx du;
  double A = 1.0;
  double b = 0.5;
};

// Direct machine-complex evaluation of a complex-side expression; the
// reference that realification is checked against.
inline cplx complex_eval(const Expr& e, const ComplexPoint& p) {
  switch (e.kind()) {
    case Kind::Rational:
      return {static_cast<double>(e.value().numerator()) / static_cast<double>(e.value().denominator()), 0.0};
    case Kind::Const:
      switch (e.sym()) {
        case Sym::i: return {0.0, 1.0};
        case Sym::pi: return {3.141592653589793, 0.0};
        case Sym::A: return {p.A, 0.0};
        case Sym::b: return {p.b, 0.0};
        default: break;
      }
      break;
    case Kind::Var:
      switch (e.sym()) {
        case Sym::x: return {p.x, 0.0};
        case Sym::u: return p.u;
        case Sym::du: return p.du;
        default: break;
      }
      break;
    case Kind::Sum: {
      cplx s = 0.0;
      for (const auto& c : e.children()) s += complex_eval(c, p);
      return s;
    }
    case Kind::Product: {
      cplx s = 1.0;
      for (const auto& c : e.children()) s *= complex_eval(c, p);
      return s;
    }
    case Kind::Power: {
      cplx z = complex_eval(e.base(), p);
      const Rational& r = e.exponent();
      if (r.denominator() == 1) {
        cplx s = 1.0;
        std::int64_t n = r.numerator() < 0 ? -r.numerator() : r.numerator();
        for (std::int64_t k = 0; k < n; ++k) s *= z;
        return r.numerator() < 0 ? 1.0 / s : s;
      }
      return std::pow(z, static_cast<double>(r.numerator()) / static_cast<double>(r.denominator()));
    }
    case Kind::Exp: return std::exp(complex_eval(e.arg(), p));
    case Kind::Log: return std::log(complex_eval(e.arg(), p));
    case Kind::Sin: return std::sin(complex_eval(e.arg(), p));
    case Kind::Cos: return std::cos(complex_eval(e.arg(), p));
    case Kind::Sinh: return std::sinh(complex_eval(e.arg(), p));
    case Kind::Cosh: return std::cosh(complex_eval(e.arg(), p));
    case Kind::Atan: return std::atan(complex_eval(e.arg(), p));
    case Kind::Atan2: break;
  }
  throw std::invalid_argument("complex_eval: unsupported node");
}

// Random analytic expressions over (x, u, du) that stay away from branch cuts
// on the default domain (Re u, Re du > 0, small imaginary parts).
class RandomComplexExpr {
 public:
  explicit RandomComplexExpr(std::uint64_t seed) : rng_(seed) {}
  Expr operator()(int depth) { return build(depth); }

 private:
  std::mt19937_64 rng_;
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  Expr leaf() {
    switch (pick(6)) {
      case 0: return sym::x();
      case 1: return sym::u();
      case 2: return sym::du();
      case 3: return Expr(Rational(pick(5) + 1, pick(3) + 1));
      case 4: return Expr(Rational(1, 3)) * sym::i();
      default: return sym::u() * sym::du();
    }
  }

  // Positive-real-part argument: 2 + tiny perturbation.
  Expr near_positive(int depth) { return Expr(2) + Expr(Rational(1, 8)) * sin(build(depth)); }

  Expr build(int depth) {
    if (depth <= 0) return leaf();
    switch (pick(9)) {
      case 0: return build(depth - 1) + build(depth - 1);
      case 1: return build(depth - 1) * build(depth - 1);
      case 2: return build(depth - 1) / near_positive(depth - 2);
      case 3: return pow(near_positive(depth - 1), Rational(pick(5) - 2, 2) + Rational(1, 3));
      case 4: return log(near_positive(depth - 1));
      case 5: return exp(Expr(Rational(1, 4)) * sin(build(depth - 1)));
      case 6: return cos(Expr(Rational(1, 2)) * build(depth - 1)) + sinh(Expr(Rational(1, 4)) * build(depth - 1));
      case 7: return atan(Expr(Rational(1, 4)) * sin(build(depth - 1)));
      default: return cosh(Expr(Rational(1, 4)) * sin(build(depth - 1)));
    }
  }
};

}  // namespace noetherkit::testing
