#include "noetherkit/variational.hpp"

namespace noetherkit {

ScalarRCODE el_scalar(const Expr& L, const SampleDomain& dom, const ZeroTestOptions& opts) {
  VarContext::complex_jet().require(L, "el_scalar");
  if (L.depends_on(Sym::ddu)) throw ContextError("el_scalar: Lagrangian must not depend on ddu");
  Expr Lp = diff(L, Sym::du);
  Expr Lpp = diff(Lp, Sym::du);
  RealPair hess = realify(Lpp);
  if (Lpp.is_zero() || (is_zero(hess.re, dom, opts).zero && is_zero(hess.im, dom, opts).zero)) {
    throw DegenerateLagrangian("Lagrangian is degenerate: d2L/du'2 vanishes (L is affine in u')");
  }
  Expr num = diff(L, Sym::u) - diff(Lp, Sym::x) - sym::du() * diff(Lp, Sym::u);
  return {num / Lpp};
}

System2 realify(const ScalarRCODE& rcode) {
  RealPair p = realify(rcode.w);
  return {p.re, p.im};
}

System2 solve_second_order(const Expr& e1, const Expr& e2) {
  std::map<Sym, Expr> zero{{Sym::ddf, Expr(0)}, {Sym::ddg, Expr(0)}};
  Expr a11 = diff(e1, Sym::ddf), a12 = diff(e1, Sym::ddg);
  Expr a21 = diff(e2, Sym::ddf), a22 = diff(e2, Sym::ddg);
  for (const Expr& a : {a11, a12, a21, a22}) {
    if (a.depends_on(Sym::ddf) || a.depends_on(Sym::ddg)) {
      throw DegenerateLagrangian("equations must be linear in ddf and ddg");
    }
  }
  Expr c1 = substitute(e1, zero), c2 = substitute(e2, zero);
  Expr det = a11 * a22 - a12 * a21;
  if (det.is_zero()) throw DegenerateLagrangian("equations do not determine ddf and ddg");
  return {(a12 * c2 - a22 * c1) / det, (a21 * c1 - a11 * c2) / det};
}

System2 el_system(const Expr& L) {
  VarContext::real_jet().require(L, "el_system");
  Substitution keep{{Sym::ddf, sym::ddf()}, {Sym::ddg, sym::ddg()}};
  Expr ef = diff(L, Sym::f) - total_derivative(diff(L, Sym::df), keep);
  Expr eg = diff(L, Sym::g) - total_derivative(diff(L, Sym::dg), keep);
  return solve_second_order(ef, eg);
}

std::vector<Expr> el_residuals(const Expr& L1, const Expr& L2, const System2& sys) {
  std::vector<Expr> out;
  Substitution rhs = sys.rhs();
  for (const Expr* L : {&L1, &L2}) {
    VarContext::real_jet().require(*L, "el_residuals");
    out.push_back(diff(*L, Sym::f) - total_derivative(diff(*L, Sym::df), rhs));
    out.push_back(diff(*L, Sym::g) - total_derivative(diff(*L, Sym::dg), rhs));
  }
  return out;
}

ZeroTestResult check_lagrangian_pair(const Expr& L1, const Expr& L2, const System2& sys, const SampleDomain& dom,
                                     const ZeroTestOptions& opts) {
  auto residuals = el_residuals(L1, L2, sys);
  return all_zero(residuals, dom, opts);
}

}  // namespace noetherkit
