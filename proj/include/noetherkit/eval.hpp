#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "noetherkit/expr.hpp"

namespace noetherkit {

/// Assignment of doubles to symbols. Unassigned symbols make evaluation fail.
class Point {
 public:
  Point() = default;
  Point(std::initializer_list<std::pair<Sym, double>> values);

  void set(Sym s, double v) {
    value_[index(s)] = v;
    assigned_.set(index(s));
  }
  double operator[](Sym s) const { return value_[index(s)]; }
  bool has(Sym s) const { return assigned_.test(index(s)); }
  const SymSet& assigned() const { return assigned_; }
  std::string describe() const;

 private:
  std::array<double, kSymCount> value_{};
  SymSet assigned_;
};

/// Several expressions flattened into one instruction tape with shared
/// subexpressions, for repeated evaluation at many points.
class CompiledExpr {
 public:
  explicit CompiledExpr(std::span<const Expr> roots);
  explicit CompiledExpr(const Expr& root) : CompiledExpr(std::span<const Expr>(&root, 1)) {}

  struct Fault {
    bool ok = true;
    std::string reason;
    Expr subterm;
  };

  /// Writes one value per root into out. On a singular subterm returns a
  /// fault describing it and leaves out unspecified.
  Fault evaluate(const Point& p, std::span<double> out) const;
  /// Single-root convenience; throws SingularityError on a fault.
  double operator()(const Point& p) const;

  std::size_t root_count() const { return roots_.size(); }
  const SymSet& symbols() const { return symbols_; }

 private:
  struct Instr {
    Kind kind;
    Sym sym;
    double constant;
    double exponent;
    std::int64_t int_exponent;
    bool integral;
    std::uint32_t first;
    std::uint32_t count;
    Expr source;
  };
  std::vector<Instr> code_;
  std::vector<std::uint32_t> operands_;
  std::vector<std::uint32_t> roots_;
  SymSet symbols_;
};

/// Evaluates e at p; throws SingularityError or ContextError.
double eval(const Expr& e, const Point& p = {});

}  // namespace noetherkit
