#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "noetherkit/eval.hpp"
#include "noetherkit/expr.hpp"

namespace noetherkit {

class DomainError : public Error {
 public:
  using Error::Error;
};

inline constexpr std::uint64_t kDefaultSeed = 0x40E7;

struct Interval {
  double lo;
  double hi;
};

/// Where the zero test and other numeric checks draw their points from.
struct SampleDomain {
  std::map<Sym, Interval> intervals;
  /// Expressions that must stay at least guard_eps away from zero (and
  /// evaluate without a singularity) at every accepted point.
  std::vector<Expr> exclusions;
  std::uint64_t seed = kDefaultSeed;

  /// x, f, df and their complex counterparts positive; g, dg straddling zero.
  static SampleDomain defaults();

  void set(Sym s, double lo, double hi) { intervals[s] = {lo, hi}; }
  bool covers(const SymSet& symbols) const;
  /// Raw (unguarded) draw number `attempt`; a pure function of seed and attempt.
  Point draw(std::uint64_t attempt) const;
};

struct ZeroTestOptions {
  int trials = 24;
  double tol = 1e-8;
  double guard_eps = 1e-3;
};

struct ZeroTestResult {
  bool zero = true;
  /// Largest |r| / (1 + m) seen over the accepted samples.
  double worst = 0.0;
  /// Point attaining `worst` when the test fails.
  std::optional<Point> witness;
  explicit operator bool() const { return zero; }
};

/// Outcome of a verification: the zero-test verdict plus a short note.
struct Verdict {
  bool pass = true;
  double worst = 0.0;
  std::optional<Point> witness;
  std::string detail;

  static Verdict from(const ZeroTestResult& r, std::string detail = {}) {
    return {r.zero, r.worst, r.witness, std::move(detail)};
  }
  static Verdict failure(std::string detail) { return {false, 0.0, std::nullopt, std::move(detail)}; }
  explicit operator bool() const { return pass; }
};

/// Guarded sample points, deterministic in (domain, options).
std::vector<Point> sample_points(const SampleDomain& dom, const ZeroTestOptions& opts, const SymSet& needed,
                                 const std::vector<Expr>& extra_guards = {});

/// Randomized identity test. Points where e itself is singular are skipped
/// like guard violations; fewer than `trials` usable points after 100x
/// oversampling raises DomainError.
ZeroTestResult is_zero(const Expr& e, const SampleDomain& dom, const ZeroTestOptions& opts = {});

/// Tests several expressions on one shared set of points; the result is the
/// conjunction, with the worst ratio across all of them.
ZeroTestResult all_zero(std::span<const Expr> es, const SampleDomain& dom, const ZeroTestOptions& opts = {});

}  // namespace noetherkit
