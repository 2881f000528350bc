#pragma once

#include <vector>

#include "noetherkit/calculus.hpp"
#include "noetherkit/complexify.hpp"
#include "noetherkit/zero_test.hpp"

namespace noetherkit {

class DegenerateLagrangian : public Error {
 public:
  using Error::Error;
};

/// u'' = w(x, u, u').
struct ScalarRCODE {
  Expr w;
  Substitution rhs() const { return {{Sym::ddu, w}}; }
};

/// f'' = w1(x, f, g, f', g'), g'' = w2(x, f, g, f', g').
struct System2 {
  Expr w1;
  Expr w2;
  Substitution rhs() const { return {{Sym::ddf, w1}, {Sym::ddg, w2}}; }
};

/// Solves the Euler-Lagrange equation of a complex Lagrangian L(x, u, u')
/// for u''. Throws DegenerateLagrangian when d2L/du'2 vanishes on dom.
ScalarRCODE el_scalar(const Expr& L, const SampleDomain& dom = SampleDomain::defaults(),
                      const ZeroTestOptions& opts = {});

/// Splits a complex r-CODE into its real system.
System2 realify(const ScalarRCODE& rcode);

/// Solves e1 = e2 = 0, both linear in (ddf, ddg), by Cramer's rule.
/// Throws DegenerateLagrangian when the equations do not fix ddf and ddg.
System2 solve_second_order(const Expr& e1, const Expr& e2);

/// The real system given by the Euler-Lagrange equations of one real L(x, f, g, f', g').
System2 el_system(const Expr& L);

/// [E_f L1, E_g L1, E_f L2, E_g L2] with E_q L = dL/dq - D_x(dL/dq') on-shell.
std::vector<Expr> el_residuals(const Expr& L1, const Expr& L2, const System2& sys);

ZeroTestResult check_lagrangian_pair(const Expr& L1, const Expr& L2, const System2& sys, const SampleDomain& dom,
                                     const ZeroTestOptions& opts = {});

}  // namespace noetherkit
