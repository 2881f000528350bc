#pragma once

#include <array>
#include <vector>

#include "noetherkit/symmetry.hpp"

namespace noetherkit {

struct IntegralPair {
  Expr I1;
  Expr I2;
};

/// I = xi L + (eta - u' xi) dL/du' - A on the complex side, realified.
IntegralPair noether_integral(const ComplexPointSymmetry& Z, const Expr& L, const Expr& A);
/// The same integral assembled from the real operators and Lagrangians with
/// complex arithmetic on pairs, without going through a complex L.
IntegralPair noether_integral(const OperatorPair& pair, const Expr& L1, const Expr& L2, const GaugePair& gauges);

/// D_x I1 and D_x I2 vanish on f'' = w1, g'' = w2.
Verdict verify_on_shell(const IntegralPair& I, const System2& sys, const SampleDomain& dom,
                        const ZeroTestOptions& opts = {});
Verdict verify_on_shell(const Expr& I, const System2& sys, const SampleDomain& dom, const ZeroTestOptions& opts = {});

/// First-order operator xi d/dx + eta_f d/df + eta_g d/dg + eta_f1 d/df' + eta_g1 d/dg'.
struct ProlongedField {
  Expr xi;
  Expr eta_f;
  Expr eta_g;
  Expr eta_f1;
  Expr eta_g1;

  Expr apply(const Expr& e) const;
};

/// Real operators with Z^(1) = X1^(1) + i X2^(1) on functions holomorphic in
/// (u, u'). The d/du and d/du' parts carry the factor 1/2 of
/// d/du = (d/df - i d/dg)/2, so X1 = xi1 d/dx + (eta1 d/df + eta2 d/dg)/2 + ...
struct CoupledOperators {
  ProlongedField X1;
  ProlongedField X2;
};
CoupledOperators coupled_operators(const OperatorPair& pair);

/// X1^(1) I1 - X2^(1) I2 and X1^(1) I2 + X2^(1) I1 both vanish, i.e. the real
/// and imaginary parts of Z^(1) I = 0, with the operators above.
Verdict verify_coupled_relations(const IntegralPair& I, const OperatorPair& pair, const SampleDomain& dom,
                                 const ZeroTestOptions& opts = {});

class TrajectoryError : public Error {
 public:
  TrajectoryError(const std::string& what, double last_good_x) : Error(what), last_good_x_(last_good_x) {}
  double last_good_x() const noexcept { return last_good_x_; }

 private:
  double last_good_x_;
};

/// State (f, g, f', g') at abscissa x.
struct TrajectoryStart {
  double x0 = 0.0;
  std::array<double, 4> state{};
  /// Values for parameters such as A and b appearing in the system.
  Point params;
};

struct Trajectory {
  std::vector<double> xs;
  std::vector<std::array<double, 4>> states;
  double step = 0.0;
  std::string method = "rk4";
  Point params;

  Point point(std::size_t k) const;
};

/// Classical fixed-step RK4 on the first-order reduction over [x0, x0 + T].
/// Guards must stay at least guard_eps away from zero and keep their sign;
/// otherwise, or on a non-finite value, TrajectoryError is thrown.
Trajectory integrate_trajectory(const System2& sys, const TrajectoryStart& start, double T, double step,
                                const std::vector<Expr>& guards = {}, double guard_eps = 1e-3);

/// max_k |I(state_k) - I(state_0)| / (1 + |I(state_0)|) per component.
std::array<double, 2> drift(const IntegralPair& I, const Trajectory& traj);
double drift(const Expr& I, const Trajectory& traj);

}  // namespace noetherkit
