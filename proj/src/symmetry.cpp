#include "noetherkit/symmetry.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace noetherkit {

namespace {

using sym::df;
using sym::dg;
using sym::du;

void require_base(const ComplexPointSymmetry& Z, std::string_view what) {
  VarContext::complex_base().require(Z.xi, what);
  VarContext::complex_base().require(Z.eta, what);
}

void require_base(const RealVectorField& X, std::string_view what) {
  VarContext::real_base().require(X.xi, what);
  VarContext::real_base().require(X.eta_f, what);
  VarContext::real_base().require(X.eta_g, what);
}

RealPair cmul(const RealPair& a, const RealPair& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
RealPair cadd(const RealPair& a, const RealPair& b) { return {a.re + b.re, a.im + b.im}; }
RealPair csub(const RealPair& a, const RealPair& b) { return {a.re - b.re, a.im - b.im}; }

Verdict verdict_for(const std::vector<Expr>& residuals, const SampleDomain& dom, const ZeroTestOptions& opts,
                    const std::string& what) {
  auto r = all_zero(residuals, dom, opts);
  return Verdict::from(r, r.zero ? what + ": holds" : what + ": residual does not vanish");
}

}  // namespace

OperatorPair split_symmetry(const ComplexPointSymmetry& Z) {
  require_base(Z, "split_symmetry");
  RealPair xi = realify(Z.xi);
  RealPair eta = realify(Z.eta);
  return {{xi.re, eta.re, eta.im}, {xi.im, eta.im, -eta.re}, Z};
}

ComplexProlongation prolong(const ComplexPointSymmetry& Z, int order) {
  if (order != 1 && order != 2) throw ContextError("prolong: order must be 1 or 2");
  require_base(Z, "prolong");
  Expr dxi = free_total_derivative(Z.xi);
  ComplexProlongation out;
  out.chi1 = free_total_derivative(Z.eta) - du() * dxi;
  if (order == 2) {
    out.chi2 = total_derivative(out.chi1, {{Sym::ddu, sym::ddu()}}) - sym::ddu() * dxi;
  }
  return out;
}

RealProlongation prolong(const RealVectorField& X, int order) {
  if (order != 1 && order != 2) throw ContextError("prolong: order must be 1 or 2");
  require_base(X, "prolong");
  Expr dxi = free_total_derivative(X.xi);
  RealProlongation out;
  out.eta_f1 = free_total_derivative(X.eta_f) - df() * dxi;
  out.eta_g1 = free_total_derivative(X.eta_g) - dg() * dxi;
  if (order == 2) {
    Substitution free{{Sym::ddf, sym::ddf()}, {Sym::ddg, sym::ddg()}};
    out.eta_f2 = total_derivative(out.eta_f1, free) - sym::ddf() * dxi;
    out.eta_g2 = total_derivative(out.eta_g1, free) - sym::ddg() * dxi;
  }
  return out;
}

Expr noether_residual(const ComplexPointSymmetry& Z, const Expr& L, const Expr& A) {
  VarContext::complex_jet().require(L, "Noether condition");
  VarContext::complex_base().require(A, "gauge");
  Expr chi1 = prolong(Z, 1).chi1;
  return make_sum({Z.xi * diff(L, Sym::x), Z.eta * diff(L, Sym::u), chi1 * diff(L, Sym::du),
                   free_total_derivative(Z.xi) * L, -free_total_derivative(A)});
}

Expr classical_noether_residual(const RealVectorField& X, const Expr& L, const Expr& A) {
  VarContext::real_jet().require(L, "Noether condition");
  VarContext::real_base().require(A, "gauge");
  RealProlongation p = prolong(X, 1);
  return make_sum({X.xi * diff(L, Sym::x), X.eta_f * diff(L, Sym::f), X.eta_g * diff(L, Sym::g),
                   p.eta_f1 * diff(L, Sym::df), p.eta_g1 * diff(L, Sym::dg), free_total_derivative(X.xi) * L,
                   -free_total_derivative(A)});
}

Verdict check_noether_like(const OperatorPair& pair, const Expr& L1, const Expr& L2, const GaugePair& gauges,
                           const SampleDomain& dom, const ZeroTestOptions& opts) {
  require_base(pair.X1, "check_noether_like");
  require_base(pair.X2, "check_noether_like");
  VarContext::real_jet().require(L1, "check_noether_like");
  VarContext::real_jet().require(L2, "check_noether_like");
  // The pair must come from one complex generator.
  std::vector<Expr> partner{pair.X2.eta_f - pair.X1.eta_g, pair.X2.eta_g + pair.X1.eta_f};
  auto shape = all_zero(partner, dom, opts);
  if (!shape.zero) {
    return Verdict::from(shape, "operators do not split a single complex generator (X2 must be "
                                "xi2 d/dx + eta2 d/df - eta1 d/dg)");
  }
  RealPair xi{pair.X1.xi, pair.X2.xi};
  RealPair eta{pair.X1.eta_f, pair.X1.eta_g};
  RealPair dxi{free_total_derivative(xi.re), free_total_derivative(xi.im)};
  RealPair deta{free_total_derivative(eta.re), free_total_derivative(eta.im)};
  RealPair eta1 = csub(deta, cmul({df(), dg()}, dxi));
  RealPair L{L1, L2};
  RealPair Lx{diff(L1, Sym::x), diff(L2, Sym::x)};
  RealPair Lu{diff(L1, Sym::f), diff(L2, Sym::f)};
  RealPair Lp{diff(L1, Sym::df), diff(L2, Sym::df)};
  RealPair dA{free_total_derivative(gauges.A1), free_total_derivative(gauges.A2)};
  RealPair R = csub(cadd(cadd(cmul(xi, Lx), cmul(eta, Lu)), cadd(cmul(eta1, Lp), cmul(dxi, L))), dA);
  return verdict_for({R.re, R.im}, dom, opts, "Noether-like condition (real pair)");
}

Verdict check_noether_like(const ComplexPointSymmetry& Z, const Expr& L, const Expr& A, const SampleDomain& dom,
                           const ZeroTestOptions& opts) {
  RealPair R = realify(noether_residual(Z, L, A));
  return verdict_for({R.re, R.im}, dom, opts, "Noether-like condition (complex)");
}

Verdict check_classical_noether(const RealVectorField& X, const Expr& L, const Expr& A, const SampleDomain& dom,
                                const ZeroTestOptions& opts) {
  return verdict_for({classical_noether_residual(X, L, A)}, dom, opts, "classical Noether condition");
}

std::vector<Expr> lie_residuals(const RealVectorField& X, const System2& sys) {
  require_base(X, "check_lie_symmetry");
  VarContext::real_jet().require(sys.w1, "system");
  VarContext::real_jet().require(sys.w2, "system");
  RealProlongation p = prolong(X, 1);
  Substitution rhs = sys.rhs();
  Expr dxi = free_total_derivative(X.xi);
  std::vector<Expr> out;
  for (const auto& [w, eta1] : {std::pair{sys.w1, p.eta_f1}, std::pair{sys.w2, p.eta_g1}}) {
    Expr eta2 = total_derivative(eta1, rhs) - w * dxi;
    Expr Xw = make_sum({X.xi * diff(w, Sym::x), X.eta_f * diff(w, Sym::f), X.eta_g * diff(w, Sym::g),
                        p.eta_f1 * diff(w, Sym::df), p.eta_g1 * diff(w, Sym::dg)});
    out.push_back(eta2 - Xw);
  }
  return out;
}

Verdict check_lie_symmetry(const RealVectorField& X, const System2& sys, const SampleDomain& dom,
                           const ZeroTestOptions& opts) {
  return verdict_for(lie_residuals(X, sys), dom, opts, "Lie symmetry condition");
}

Verdict check_lie_symmetry(const ComplexPointSymmetry& Z, const ScalarRCODE& rcode, const SampleDomain& dom,
                           const ZeroTestOptions& opts) {
  VarContext::complex_jet().require(rcode.w, "r-CODE");
  Expr chi1 = prolong(Z, 1).chi1;
  Expr chi2 = total_derivative(chi1, rcode.rhs()) - rcode.w * free_total_derivative(Z.xi);
  Expr Zw = make_sum({Z.xi * diff(rcode.w, Sym::x), Z.eta * diff(rcode.w, Sym::u), chi1 * diff(rcode.w, Sym::du)});
  RealPair R = realify(chi2 - Zw);
  return verdict_for({R.re, R.im}, dom, opts, "Lie symmetry condition (complex)");
}

std::vector<Expr> default_gauge_basis(int degree) {
  std::vector<Expr> out;
  for (int total = 1; total <= degree; ++total) {
    for (int j = 0; j <= total; ++j) out.push_back(pow(sym::x(), total - j) * pow(sym::u(), j));
  }
  return out;
}

std::vector<Expr> default_real_gauge_basis(int degree) {
  std::vector<Expr> out;
  for (int total = 1; total <= degree; ++total) {
    for (int j = 0; j <= total; ++j) {
      for (int k = 0; k <= total - j; ++k) {
        out.push_back(pow(sym::x(), total - j - k) * pow(sym::f(), j) * pow(sym::g(), k));
      }
    }
  }
  return out;
}

std::optional<Rational> snap_rational(double v, std::int64_t max_den, double tol) {
  if (!std::isfinite(v)) return std::nullopt;
  if (std::abs(v) < tol) return Rational(0);
  // Continued-fraction convergents of v.
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double x = v;
  for (int iter = 0; iter < 40; ++iter) {
    double a = std::floor(x);
    if (std::abs(a) > 1e15) break;
    auto ai = static_cast<std::int64_t>(a);
    std::int64_t h2 = ai * h1 + h0;
    std::int64_t k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    double approx = static_cast<double>(h1) / static_cast<double>(k1);
    if (std::abs(approx - v) <= tol * (1.0 + std::abs(v))) return Rational(h1, k1);
    double frac = x - a;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  return std::nullopt;
}

namespace {

// Least-squares fit of target = sum_k c_k * columns_k over sampled points.
// complex_coeffs: columns and target are realified pairs and c_k = a_k + i b_k.
struct Fit {
  Eigen::VectorXd coeffs;
  double relative_residual;
};

std::optional<Fit> fit_columns(const std::vector<RealPair>& columns, const RealPair& target, bool complex_coeffs,
                               const SampleDomain& dom, const ZeroTestOptions& opts) {
  const auto n = static_cast<Eigen::Index>(columns.size());
  const Eigen::Index unknowns = complex_coeffs ? 2 * n : n;
  std::vector<Expr> roots{target.re, target.im};
  SymSet needed = target.re.symbols() | target.im.symbols();
  for (const auto& c : columns) {
    roots.push_back(c.re);
    roots.push_back(c.im);
    needed |= c.re.symbols() | c.im.symbols();
  }
  CompiledExpr code(roots);
  ZeroTestOptions sopts = opts;
  sopts.trials = static_cast<int>(unknowns) + 12;
  std::vector<Point> pts;
  for (const auto& p : sample_points(dom, [&] { auto o = sopts; o.trials *= 3; return o; }(), needed)) {
    std::vector<double> v(roots.size());
    if (code.evaluate(p, v).ok) pts.push_back(p);
    if (static_cast<int>(pts.size()) >= sopts.trials) break;
  }
  if (static_cast<int>(pts.size()) < sopts.trials) return std::nullopt;
  const auto rows = static_cast<Eigen::Index>(pts.size()) * (complex_coeffs ? 2 : 1);
  Eigen::MatrixXd M(rows, unknowns);
  Eigen::VectorXd rhs(rows);
  std::vector<double> v(roots.size());
  Eigen::Index r = 0;
  for (const auto& p : pts) {
    code.evaluate(p, v);
    if (complex_coeffs) {
      // (a + ib)(P + iQ) = (aP - bQ) + i(aQ + bP)
      for (Eigen::Index k = 0; k < n; ++k) {
        double P = v[2 + 2 * k];
        double Q = v[3 + 2 * k];
        M(r, k) = P;
        M(r, n + k) = -Q;
        M(r + 1, k) = Q;
        M(r + 1, n + k) = P;
      }
      rhs(r) = v[0];
      rhs(r + 1) = v[1];
      r += 2;
    } else {
      for (Eigen::Index k = 0; k < n; ++k) M(r, k) = v[2 + 2 * k];
      rhs(r) = v[0];
      r += 1;
    }
  }
  Eigen::VectorXd c = M.completeOrthogonalDecomposition().solve(rhs);
  double scale = 1.0 + rhs.norm();
  return Fit{c, (M * c - rhs).norm() / scale};
}

std::optional<std::vector<Rational>> snap_all(const Eigen::VectorXd& c) {
  std::vector<Rational> out;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    auto q = snap_rational(c(k));
    if (!q) return std::nullopt;
    out.push_back(*q);
  }
  return out;
}

}  // namespace

GaugeSearch find_gauge(const ComplexPointSymmetry& Z, const Expr& L, const SampleDomain& dom,
                       const std::vector<Expr>& basis, const ZeroTestOptions& opts) {
  for (const auto& b : basis) VarContext::complex_base().require(b, "gauge basis");
  Expr R = noether_residual(Z, L, Expr(0));
  RealPair curvature = realify(diff(diff(R, Sym::du), Sym::du));
  if (!all_zero(std::vector<Expr>{curvature.re, curvature.im}, dom, opts).zero) {
    return {std::nullopt, "Z^(1)L + (D_x xi)L is not affine in u', so it is not a total derivative"};
  }
  RealPair target = realify(R);
  std::vector<RealPair> columns;
  for (const auto& b : basis) columns.push_back(realify(free_total_derivative(b)));
  const auto n = basis.size();
  SampleDomain d = dom;
  for (int attempt = 0; attempt < 5; ++attempt) {
    d.seed = dom.seed + 0x9e37 * static_cast<std::uint64_t>(attempt);
    auto fit = fit_columns(columns, target, true, d, opts);
    if (!fit) continue;
    if (fit->relative_residual > 1e-6) {
      return {std::nullopt, "no combination of the gauge basis matches the residual"};
    }
    auto q = snap_all(fit->coeffs);
    if (!q) continue;
    std::vector<Expr> terms;
    for (std::size_t k = 0; k < n; ++k) {
      Expr c = Expr((*q)[k]) + Expr((*q)[n + k]) * sym::i();
      terms.push_back(c * basis[k]);
    }
    Expr A = make_sum(std::move(terms));
    if (check_noether_like(Z, L, A, dom, opts).pass) return {A, "gauge found"};
  }
  return {std::nullopt, "fitted gauge failed verification"};
}

GaugeSearch find_real_gauge(const RealVectorField& X, const Expr& L, const SampleDomain& dom,
                            const std::vector<Expr>& basis, const ZeroTestOptions& opts) {
  for (const auto& b : basis) VarContext::real_base().require(b, "gauge basis");
  Expr R = classical_noether_residual(X, L, Expr(0));
  std::vector<Expr> curvature{diff(diff(R, Sym::df), Sym::df), diff(diff(R, Sym::df), Sym::dg),
                              diff(diff(R, Sym::dg), Sym::dg)};
  if (!all_zero(curvature, dom, opts).zero) {
    return {std::nullopt, "X^(1)L + (D_x xi)L is not affine in (f', g'), so it is not a total derivative"};
  }
  std::vector<RealPair> columns;
  for (const auto& b : basis) columns.push_back({free_total_derivative(b), Expr(0)});
  SampleDomain d = dom;
  for (int attempt = 0; attempt < 5; ++attempt) {
    d.seed = dom.seed + 0x9e37 * static_cast<std::uint64_t>(attempt);
    auto fit = fit_columns(columns, {R, Expr(0)}, false, d, opts);
    if (!fit) continue;
    if (fit->relative_residual > 1e-6) {
      return {std::nullopt, "no combination of the gauge basis matches the residual"};
    }
    auto q = snap_all(fit->coeffs);
    if (!q) continue;
    std::vector<Expr> terms;
    for (std::size_t k = 0; k < basis.size(); ++k) terms.push_back(Expr((*q)[k]) * basis[k]);
    Expr A = make_sum(std::move(terms));
    if (check_classical_noether(X, L, A, dom, opts).pass) return {A, "gauge found"};
  }
  return {std::nullopt, "fitted gauge failed verification"};
}

}  // namespace noetherkit
