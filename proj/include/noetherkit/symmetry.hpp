#pragma once

#include <optional>
#include <string>
#include <vector>

#include "noetherkit/complexify.hpp"
#include "noetherkit/variational.hpp"
#include "noetherkit/zero_test.hpp"

namespace noetherkit {

/// Z = xi d/dx + eta d/du with xi, eta over (x, u).
struct ComplexPointSymmetry {
  Expr xi;
  Expr eta;
};

/// X = xi d/dx + eta_f d/df + eta_g d/dg with coefficients over (x, f, g).
struct RealVectorField {
  Expr xi;
  Expr eta_f;
  Expr eta_g;

  bool is_zero() const { return xi.is_zero() && eta_f.is_zero() && eta_g.is_zero(); }
};

struct OperatorPair {
  RealVectorField X1;
  RealVectorField X2;
  std::optional<ComplexPointSymmetry> origin;
};

struct GaugePair {
  Expr A1;
  Expr A2;
};

/// X1 = xi1 d/dx + eta1 d/df + eta2 d/dg, X2 = xi2 d/dx + eta2 d/df - eta1 d/dg
/// where (xi1, xi2) and (eta1, eta2) are the realified coefficients of Z.
OperatorPair split_symmetry(const ComplexPointSymmetry& Z);

struct ComplexProlongation {
  Expr chi1;
  Expr chi2;  // zero unless order 2 was requested
};

struct RealProlongation {
  Expr eta_f1;
  Expr eta_g1;
  Expr eta_f2;  // second-order coefficients, zero unless requested
  Expr eta_g2;
};

/// Prolongation coefficients with the free total derivative (second-order
/// coefficients contain ddu, or ddf and ddg, symbolically).
ComplexProlongation prolong(const ComplexPointSymmetry& Z, int order);
RealProlongation prolong(const RealVectorField& X, int order);

/// Z^(1)L + (D_x xi)L - D_x A, over (x, u, du).
Expr noether_residual(const ComplexPointSymmetry& Z, const Expr& L, const Expr& A);
/// X^(1)L + (D_x xi)L - D_x A for one real Lagrangian.
Expr classical_noether_residual(const RealVectorField& X, const Expr& L, const Expr& A);

/// The Noether-like condition for a pair. With only (X1, X2) the check is
/// done on the real side: xi = xi1 + i xi2 and eta = eta1 + i eta2 are
/// rebuilt from the operators and the complex condition is expanded in
/// (L1, L2) with complex arithmetic on pairs. Both components must vanish.
Verdict check_noether_like(const OperatorPair& pair, const Expr& L1, const Expr& L2, const GaugePair& gauges,
                           const SampleDomain& dom, const ZeroTestOptions& opts = {});
/// The same condition stated on the complex side and realified.
Verdict check_noether_like(const ComplexPointSymmetry& Z, const Expr& L, const Expr& A, const SampleDomain& dom,
                           const ZeroTestOptions& opts = {});

Verdict check_classical_noether(const RealVectorField& X, const Expr& L, const Expr& A, const SampleDomain& dom,
                                const ZeroTestOptions& opts = {});

/// Residuals of the second-prolonged field on f'' = w1, g'' = w2 (on-shell).
std::vector<Expr> lie_residuals(const RealVectorField& X, const System2& sys);
Verdict check_lie_symmetry(const RealVectorField& X, const System2& sys, const SampleDomain& dom,
                           const ZeroTestOptions& opts = {});
Verdict check_lie_symmetry(const ComplexPointSymmetry& Z, const ScalarRCODE& rcode, const SampleDomain& dom,
                           const ZeroTestOptions& opts = {});

/// Monomials x^i u^j with 1 <= i + j <= degree.
std::vector<Expr> default_gauge_basis(int degree = 3);
/// Monomials x^i f^j g^k with 1 <= i + j + k <= degree.
std::vector<Expr> default_real_gauge_basis(int degree = 3);

struct GaugeSearch {
  std::optional<Expr> gauge;  // empty: not a total derivative over the basis
  std::string detail;
};

/// Looks for a complex gauge A = sum c_k basis_k (complex c_k) with
/// Z^(1)L + (D_x xi)L = D_x A. Coefficients are fitted by least squares on
/// sampled points, snapped to nearby rationals and then verified.
GaugeSearch find_gauge(const ComplexPointSymmetry& Z, const Expr& L, const SampleDomain& dom,
                       const std::vector<Expr>& basis = default_gauge_basis(), const ZeroTestOptions& opts = {});
/// Real analogue for the classical condition with one Lagrangian.
GaugeSearch find_real_gauge(const RealVectorField& X, const Expr& L, const SampleDomain& dom,
                            const std::vector<Expr>& basis = default_real_gauge_basis(),
                            const ZeroTestOptions& opts = {});

/// Nearest p/q with q <= max_den when within tol of v.
std::optional<Rational> snap_rational(double v, std::int64_t max_den = 720, double tol = 1e-9);

}  // namespace noetherkit
