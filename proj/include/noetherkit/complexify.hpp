#pragma once

#include "noetherkit/expr.hpp"
#include "noetherkit/zero_test.hpp"

namespace noetherkit {

/// Real and imaginary parts of a complex quantity, over the real jet.
struct RealPair {
  Expr re;
  Expr im;
};

/// Realification under u = f + i g: x -> (x, 0), u -> (f, g), du -> (df, dg),
/// ddu -> (ddf, ddg), i -> (0, 1); A, b and pi are real. Principal branches
/// are used for log and fractional powers. atan2 has no complex extension
/// and raises UnsupportedError unless both arguments are real.
RealPair realify(const Expr& e);

/// The four Cauchy-Riemann residuals in (f, g) and (df, dg).
std::vector<Expr> cauchy_riemann_residuals(const RealPair& p);
ZeroTestResult check_cauchy_riemann(const RealPair& p, const SampleDomain& dom, const ZeroTestOptions& opts = {});

}  // namespace noetherkit
