#include "noetherkit/integrals.hpp"

#include <cmath>
#include <sstream>

namespace noetherkit {

namespace {

RealPair cmul(const RealPair& a, const RealPair& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

}  // namespace

IntegralPair noether_integral(const ComplexPointSymmetry& Z, const Expr& L, const Expr& A) {
  VarContext::complex_jet().require(L, "noether_integral");
  VarContext::complex_base().require(Z.xi, "noether_integral");
  VarContext::complex_base().require(Z.eta, "noether_integral");
  VarContext::complex_base().require(A, "gauge");
  Expr I = Z.xi * L + (Z.eta - sym::du() * Z.xi) * diff(L, Sym::du) - A;
  RealPair p = realify(I);
  return {p.re, p.im};
}

IntegralPair noether_integral(const OperatorPair& pair, const Expr& L1, const Expr& L2, const GaugePair& gauges) {
  RealPair xi{pair.X1.xi, pair.X2.xi};
  RealPair eta{pair.X1.eta_f, pair.X1.eta_g};
  RealPair L{L1, L2};
  RealPair Lp{diff(L1, Sym::df), diff(L2, Sym::df)};
  RealPair v = cmul({sym::df(), sym::dg()}, xi);
  RealPair a = cmul(xi, L);
  RealPair b = cmul({eta.re - v.re, eta.im - v.im}, Lp);
  return {a.re + b.re - gauges.A1, a.im + b.im - gauges.A2};
}

Verdict verify_on_shell(const IntegralPair& I, const System2& sys, const SampleDomain& dom,
                        const ZeroTestOptions& opts) {
  VarContext::real_jet().require(I.I1, "integral");
  VarContext::real_jet().require(I.I2, "integral");
  Substitution rhs = sys.rhs();
  std::vector<Expr> d{total_derivative(I.I1, rhs), total_derivative(I.I2, rhs)};
  auto r = all_zero(d, dom, opts);
  return Verdict::from(r, r.zero ? "conserved on-shell" : "total derivative does not vanish on-shell");
}

Verdict verify_on_shell(const Expr& I, const System2& sys, const SampleDomain& dom, const ZeroTestOptions& opts) {
  VarContext::real_jet().require(I, "integral");
  auto r = is_zero(total_derivative(I, sys.rhs()), dom, opts);
  return Verdict::from(r, r.zero ? "conserved on-shell" : "total derivative does not vanish on-shell");
}

CoupledOperators coupled_operators(const OperatorPair& pair) {
  const Expr& xi1 = pair.X1.xi;
  const Expr& xi2 = pair.X2.xi;
  const Expr& eta1 = pair.X1.eta_f;
  const Expr& eta2 = pair.X1.eta_g;
  Expr d1 = free_total_derivative(xi1);
  Expr d2 = free_total_derivative(xi2);
  // chi = D eta - u' D xi with complex multiplication on pairs.
  Expr chr = free_total_derivative(eta1) - (sym::df() * d1 - sym::dg() * d2);
  Expr chi = free_total_derivative(eta2) - (sym::df() * d2 + sym::dg() * d1);
  Expr half(Rational(1, 2));
  return {{xi1, half * eta1, half * eta2, half * chr, half * chi},
          {xi2, half * eta2, -(half * eta1), half * chi, -(half * chr)}};
}

Expr ProlongedField::apply(const Expr& e) const {
  return make_sum({xi * diff(e, Sym::x), eta_f * diff(e, Sym::f), eta_g * diff(e, Sym::g),
                   eta_f1 * diff(e, Sym::df), eta_g1 * diff(e, Sym::dg)});
}

Verdict verify_coupled_relations(const IntegralPair& I, const OperatorPair& pair, const SampleDomain& dom,
                                 const ZeroTestOptions& opts) {
  VarContext::real_jet().require(I.I1, "integral");
  VarContext::real_jet().require(I.I2, "integral");
  auto ops = coupled_operators(pair);
  std::vector<Expr> r{ops.X1.apply(I.I1) - ops.X2.apply(I.I2), ops.X1.apply(I.I2) + ops.X2.apply(I.I1)};
  auto z = all_zero(r, dom, opts);
  return Verdict::from(z, z.zero ? "coupled relations hold" : "coupled relations fail");
}

Point Trajectory::point(std::size_t k) const {
  Point p = params;
  p.set(Sym::x, xs[k]);
  p.set(Sym::f, states[k][0]);
  p.set(Sym::g, states[k][1]);
  p.set(Sym::df, states[k][2]);
  p.set(Sym::dg, states[k][3]);
  return p;
}

Trajectory integrate_trajectory(const System2& sys, const TrajectoryStart& start, double T, double step,
                                const std::vector<Expr>& guards, double guard_eps) {
  if (!(step > 0.0)) throw TrajectoryError("step must be positive", start.x0);
  if (T < step) throw TrajectoryError("T must be at least one step", start.x0);
  VarContext::real_jet().require(sys.w1, "system");
  VarContext::real_jet().require(sys.w2, "system");
  CompiledExpr rhs(std::vector<Expr>{sys.w1, sys.w2});
  CompiledExpr guard_code(guards);
  std::vector<double> gv(guards.size());
  std::vector<double> sign(guards.size(), 0.0);

  Trajectory traj;
  traj.step = step;
  traj.params = start.params;
  using State = std::array<double, 4>;
  auto at = [&](double x, const State& y) {
    Point p = start.params;
    p.set(Sym::x, x);
    p.set(Sym::f, y[0]);
    p.set(Sym::g, y[1]);
    p.set(Sym::df, y[2]);
    p.set(Sym::dg, y[3]);
    return p;
  };
  auto fail = [&](const std::string& why, double x) -> TrajectoryError {
    std::ostringstream os;
    double last = traj.xs.empty() ? start.x0 : traj.xs.back();
    os << "trajectory truncated at x = " << x << ": " << why << " (last good x = " << last << ")";
    return TrajectoryError(os.str(), last);
  };
  auto check_guards = [&](double x, const State& y) {
    if (guards.empty()) return;
    auto fault = guard_code.evaluate(at(x, y), gv);
    if (!fault.ok) throw fail("guard " + to_string(fault.subterm) + ": " + fault.reason, x);
    for (std::size_t k = 0; k < gv.size(); ++k) {
      if (std::abs(gv[k]) < guard_eps) throw fail("guard " + to_string(guards[k]) + " approached zero", x);
      double s = gv[k] > 0 ? 1.0 : -1.0;
      if (sign[k] != 0.0 && s != sign[k]) throw fail("guard " + to_string(guards[k]) + " changed sign", x);
      sign[k] = s;
    }
  };
  auto deriv = [&](double x, const State& y) -> State {
    double w[2];
    auto fault = rhs.evaluate(at(x, y), std::span<double>(w, 2));
    if (!fault.ok) throw fail(fault.reason + " in " + to_string(fault.subterm), x);
    return {y[2], y[3], w[0], w[1]};
  };

  State y = start.state;
  double x = start.x0;
  check_guards(x, y);
  traj.xs.push_back(x);
  traj.states.push_back(y);
  const auto n = static_cast<long>(std::llround(T / step));
  for (long k = 1; k <= n; ++k) {
    auto axpy = [](const State& a, double h, const State& b) {
      return State{a[0] + h * b[0], a[1] + h * b[1], a[2] + h * b[2], a[3] + h * b[3]};
    };
    State k1 = deriv(x, y);
    State k2 = deriv(x + step / 2, axpy(y, step / 2, k1));
    State k3 = deriv(x + step / 2, axpy(y, step / 2, k2));
    State k4 = deriv(x + step, axpy(y, step, k3));
    for (int j = 0; j < 4; ++j) y[j] += step / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    x = start.x0 + static_cast<double>(k) * step;
    for (double v : y) {
      if (!std::isfinite(v)) throw fail("non-finite state", x);
    }
    check_guards(x, y);
    traj.xs.push_back(x);
    traj.states.push_back(y);
  }
  return traj;
}

double drift(const Expr& I, const Trajectory& traj) {
  CompiledExpr code(I);
  double i0 = code(traj.point(0));
  double worst = 0.0;
  for (std::size_t k = 1; k < traj.xs.size(); ++k) {
    worst = std::max(worst, std::abs(code(traj.point(k)) - i0) / (1.0 + std::abs(i0)));
  }
  return worst;
}

std::array<double, 2> drift(const IntegralPair& I, const Trajectory& traj) {
  return {drift(I.I1, traj), drift(I.I2, traj)};
}

}  // namespace noetherkit
