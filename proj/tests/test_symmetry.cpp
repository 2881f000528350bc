#include <gtest/gtest.h>

#include "noetherkit/parse.hpp"
#include "noetherkit/symmetry.hpp"

namespace noetherkit {
namespace {

using namespace sym;

const SampleDomain kDom = SampleDomain::defaults();

bool same(const Expr& a, const Expr& b) { return is_zero(a - b, kDom).zero; }

bool same_field(const RealVectorField& a, const RealVectorField& b) {
  return same(a.xi, b.xi) && same(a.eta_f, b.eta_f) && same(a.eta_g, b.eta_g);
}

TEST(Split, Translation) {
  auto p = split_symmetry({Expr(1), Expr(0)});
  EXPECT_TRUE(same_field(p.X1, {Expr(1), Expr(0), Expr(0)}));
  EXPECT_TRUE(p.X2.is_zero());
}

TEST(Split, DependentTranslation) {
  auto p = split_symmetry({Expr(0), Expr(1)});
  EXPECT_TRUE(same_field(p.X1, {Expr(0), Expr(1), Expr(0)}));
  // X2 = eta2 d/df - eta1 d/dg: -d/dg, the printed d/dg up to sign.
  EXPECT_TRUE(same_field(p.X2, {Expr(0), Expr(0), Expr(-1)}));
}

TEST(Split, RotatedTranslation) {
  auto p = split_symmetry({Expr(0), i()});
  EXPECT_TRUE(same_field(p.X1, {Expr(0), Expr(0), Expr(1)}));
  EXPECT_TRUE(same_field(p.X2, {Expr(0), Expr(1), Expr(0)}));
}

TEST(Split, ProjectiveGenerator) {
  auto p = split_symmetry({x() * x(), x() * u()});
  EXPECT_TRUE(same_field(p.X1, {x() * x(), x() * f(), x() * g()}));
  EXPECT_TRUE(same_field(p.X2, {Expr(0), x() * g(), -(x() * f())}));
}

TEST(Split, IsRealLinear) {
  ComplexPointSymmetry z1{x() * x(), x() * u()};
  ComplexPointSymmetry z2{u(), exp(u()) + i() * x()};
  Rational a(3, 2);
  Rational b(-2);
  auto s1 = split_symmetry(z1);
  auto s2 = split_symmetry(z2);
  auto s = split_symmetry({Expr(a) * z1.xi + Expr(b) * z2.xi, Expr(a) * z1.eta + Expr(b) * z2.eta});
  auto combine = [&](const RealVectorField& p, const RealVectorField& q) {
    return RealVectorField{Expr(a) * p.xi + Expr(b) * q.xi, Expr(a) * p.eta_f + Expr(b) * q.eta_f,
                           Expr(a) * p.eta_g + Expr(b) * q.eta_g};
  };
  EXPECT_TRUE(same_field(s.X1, combine(s1.X1, s2.X1)));
  EXPECT_TRUE(same_field(s.X2, combine(s1.X2, s2.X2)));
}

TEST(Prolong, Examples) {
  EXPECT_TRUE(prolong(ComplexPointSymmetry{Expr(0), Expr(1)}, 1).chi1.is_zero());
  EXPECT_EQ(prolong(ComplexPointSymmetry{2 * x(), u()}, 1).chi1, -du());
  auto p = prolong(ComplexPointSymmetry{x() * x(), x() * u()}, 2);
  // D_x(chi1) - ddu D_x(xi) with chi1 = u - x du.
  EXPECT_TRUE(same(realify(p.chi1).re, f() - x() * df()));
  EXPECT_TRUE(same(realify(p.chi2).re, -3 * x() * ddf()));
  // Oracle: the second prolongation annihilates u'' on u'' = 0.
  EXPECT_TRUE(check_lie_symmetry(ComplexPointSymmetry{x() * x(), x() * u()}, ScalarRCODE{Expr(0)}, kDom).pass);
}

TEST(Prolong, RealSecondOrderMatchesSplitComplex) {
  // With a real-valued xi the prolongation of X1 is the realified complex one.
  ComplexPointSymmetry Zr{x() * x(), x() * u() * u()};
  auto pr = prolong(split_symmetry(Zr).X1, 2);
  auto pz = prolong(Zr, 2);
  EXPECT_TRUE(same(pr.eta_f1, realify(pz.chi1).re));
  EXPECT_TRUE(same(pr.eta_g1, realify(pz.chi1).im));
  EXPECT_TRUE(same(pr.eta_f2, realify(pz.chi2).re));
  EXPECT_TRUE(same(pr.eta_g2, realify(pz.chi2).im));
}

const Expr kApp1 = parse("exp(du) + log(u)");
const Expr kApp2 = parse("du*exp(du) + x*u");

TEST(NoetherLike, Application1Translation) {
  RealPair L = realify(kApp1);
  auto pair = split_symmetry({Expr(1), Expr(0)});
  EXPECT_TRUE(check_noether_like(pair, L.re, L.im, {Expr(0), Expr(0)}, kDom).pass);
  EXPECT_TRUE(check_noether_like(ComplexPointSymmetry{Expr(1), Expr(0)}, kApp1, Expr(0), kDom).pass);
}

TEST(NoetherLike, Application2WithGauge) {
  RealPair L = realify(kApp2);
  auto pair = split_symmetry({Expr(0), Expr(1)});
  EXPECT_TRUE(check_noether_like(pair, L.re, L.im, {x() * x() / 2, Expr(0)}, kDom).pass);
  EXPECT_FALSE(check_noether_like(pair, L.re, L.im, {Expr(0), Expr(0)}, kDom).pass);
}

TEST(NoetherLike, Application1DependentTranslationFails) {
  RealPair L = realify(kApp1);
  auto pair = split_symmetry({Expr(0), Expr(1)});
  EXPECT_FALSE(check_noether_like(pair, L.re, L.im, {Expr(0), Expr(0)}, kDom).pass);
  EXPECT_FALSE(check_noether_like(ComplexPointSymmetry{Expr(0), Expr(1)}, kApp1, Expr(0), kDom).pass);
}

TEST(NoetherLike, RejectsOperatorsThatAreNotASplitPair) {
  RealPair L = realify(kApp2);
  OperatorPair bad{{Expr(0), Expr(1), Expr(0)}, {Expr(0), Expr(1), Expr(0)}, std::nullopt};
  auto v = check_noether_like(bad, L.re, L.im, {x() * x() / 2, Expr(0)}, kDom);
  EXPECT_FALSE(v.pass);
}

class RoutesAgree : public ::testing::TestWithParam<std::tuple<const char*, const char*, const char*, const char*>> {};

// The real-pair route and the complex route give the same verdict.
TEST_P(RoutesAgree, OnVerdict) {
  auto [Ls, xis, etas, As] = GetParam();
  Expr L = parse(Ls);
  ComplexPointSymmetry Z{parse(xis), parse(etas)};
  Expr A = parse(As);
  RealPair Lr = realify(L);
  RealPair Ar = realify(A);
  bool complex_route = check_noether_like(Z, L, A, kDom).pass;
  bool real_route = check_noether_like(split_symmetry(Z), Lr.re, Lr.im, {Ar.re, Ar.im}, kDom).pass;
  EXPECT_EQ(complex_route, real_route);
}

INSTANTIATE_TEST_SUITE_P(
    Cases, RoutesAgree,
    ::testing::Values(std::tuple{"du*exp(du) + x*u", "0", "1", "x^2/2"}, std::tuple{"du*exp(du) + x*u", "0", "1", "0"},
                      std::tuple{"du^2/2", "x^2", "x*u", "u^2/2"}, std::tuple{"du^2/2", "2*x", "u", "0"},
                      std::tuple{"du^2/2", "u", "0", "0"}, std::tuple{"-4*du^(1/2) + u", "x", "-u", "0"},
                      std::tuple{"du^2/2", "0", "i*x", "i*u"}, std::tuple{"exp(du) + log(u)", "1", "0", "0"}));

TEST(ClassicalNoether, Examples) {
  Expr L1 = df() * df() / 2 - dg() * dg() / 2;
  EXPECT_TRUE(check_classical_noether({Expr(1), Expr(0), Expr(0)}, L1, Expr(0), kDom).pass);
  RealVectorField scaling{Expr(0), f(), Expr(0)};
  EXPECT_FALSE(check_classical_noether(scaling, L1, Expr(0), kDom).pass);
  EXPECT_FALSE(find_real_gauge(scaling, L1, kDom).gauge.has_value());
}

TEST(ClassicalNoether, PureRealGeneratorReducesToTwoClassicalConditions) {
  // For real xi and eta the Noether-like pair condition is the classical
  // condition for L1 and L2 separately.
  RealPair L = realify(du() * du() / 2);
  ComplexPointSymmetry Z{x() * x(), x() * u()};
  auto pair = split_symmetry(Z);
  GaugePair A{(f() * f() - g() * g()) / 2, f() * g()};
  bool pair_verdict = check_noether_like(pair, L.re, L.im, A, kDom).pass;
  bool classical = check_classical_noether(pair.X1, L.re, A.A1, kDom).pass &&
                   check_classical_noether(pair.X1, L.im, A.A2, kDom).pass;
  EXPECT_TRUE(pair_verdict);
  EXPECT_EQ(pair_verdict, classical);
}

TEST(Lie, FreeParticle) {
  System2 sys{Expr(0), Expr(0)};
  EXPECT_TRUE(check_lie_symmetry(RealVectorField{x() * x(), x() * f(), x() * g()}, sys, kDom).pass);
  EXPECT_FALSE(check_lie_symmetry(RealVectorField{Expr(0), x() * g(), -(x() * f())}, sys, kDom).pass);
  System2 autonomous{f() * dg() - g(), df() * df()};
  EXPECT_TRUE(check_lie_symmetry(RealVectorField{Expr(1), Expr(0), Expr(0)}, autonomous, kDom).pass);
}

TEST(FindGauge, Examples) {
  auto a = find_gauge({Expr(0), Expr(1)}, kApp2, kDom);
  ASSERT_TRUE(a.gauge) << a.detail;
  EXPECT_EQ(*a.gauge, x() * x() / 2);
  auto b = find_gauge({Expr(1), Expr(0)}, du() * du() / 2, kDom);
  ASSERT_TRUE(b.gauge);
  EXPECT_TRUE(b.gauge->is_zero());
  auto c = find_gauge({Expr(0), x()}, du() * du() / 2, kDom);
  ASSERT_TRUE(c.gauge);
  EXPECT_EQ(*c.gauge, u());
}

TEST(FindGauge, ComplexCoefficients) {
  auto a = find_gauge({Expr(0), i() * x()}, du() * du() / 2, kDom);
  ASSERT_TRUE(a.gauge);
  EXPECT_EQ(*a.gauge, i() * u());
}

TEST(FindGauge, ReportsNonTotalDerivative) {
  auto a = find_gauge({Expr(0), Expr(1)}, kApp1, kDom);
  EXPECT_FALSE(a.gauge.has_value());
  // Soundness: any gauge returned passes the Noether-like check.
  auto b = find_gauge({x(), -u()}, -4 * sqrt(du()) + u(), kDom);
  ASSERT_TRUE(b.gauge);
  EXPECT_TRUE(check_noether_like(ComplexPointSymmetry{x(), -u()}, -4 * sqrt(du()) + u(), *b.gauge, kDom).pass);
}

TEST(FindRealGauge, FreeParticleStandardLagrangian) {
  Expr L = (df() * df() + dg() * dg()) / 2;
  auto a = find_real_gauge({Expr(0), x(), Expr(0)}, L, kDom);
  ASSERT_TRUE(a.gauge);
  EXPECT_EQ(*a.gauge, f());
}

TEST(SnapRational, Basics) {
  EXPECT_EQ(*snap_rational(0.5), Rational(1, 2));
  EXPECT_EQ(*snap_rational(-2.0 / 3.0), Rational(-2, 3));
  EXPECT_EQ(*snap_rational(1e-12), Rational(0));
  EXPECT_FALSE(snap_rational(3.14159265358979).has_value());
}

}  // namespace
}  // namespace noetherkit
