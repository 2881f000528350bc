#pragma once

// Immutable symbolic expressions with exact rational constants.
//
// An Expr is a cheap handle onto a shared, immutable node. All builders
// canonicalize locally: sums and products are flattened, rational constants
// are folded, like terms and like factors are collected, children are sorted
// by a total order, x^0 -> 1 and 0*x -> 0. No trigonometric or exponential
// identities are applied; identity checking belongs to the zero test.

#include <bitset>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

namespace noetherkit {

using Rational = boost::rational<std::int64_t>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A variable was used outside the context an operation expects.
class ContextError : public Error {
 public:
  using Error::Error;
};

/// A node was requested that has no meaning in the current setting
/// (e.g. atan2 on the complex side).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, std::string subterm)
      : Error(what), subterm_(std::move(subterm)) {}
  const std::string& subterm() const noexcept { return subterm_; }

 private:
  std::string subterm_;
};

// Symbols. Variables are the jet coordinates of the complex side
// (x, u, u', u'') and the real side (x, f, g, f', g', f'', g'').
// A and b are real parameters, sampled like variables but constant in x.
// pi is a fixed constant; i is the imaginary unit (complex side only).
enum class Sym : std::uint8_t { x, u, du, ddu, f, g, df, dg, ddf, ddg, A, b, pi, i };
inline constexpr std::size_t kSymCount = 14;

using SymSet = std::bitset<kSymCount>;

std::string_view sym_name(Sym s);
std::optional<Sym> sym_from_name(std::string_view name);
constexpr std::size_t index(Sym s) { return static_cast<std::size_t>(s); }
constexpr bool is_variable(Sym s) { return index(s) <= index(Sym::ddg); }
constexpr bool is_parameter(Sym s) { return s == Sym::A || s == Sym::b; }

enum class Kind : std::uint8_t {
  Rational,
  Const,
  Var,
  Sum,
  Product,
  Power,
  Exp,
  Log,
  Sin,
  Cos,
  Sinh,
  Cosh,
  Atan,
  Atan2,
};

std::string_view kind_name(Kind k);

struct Node;

class Expr {
 public:
  Expr();  // the constant 0
  Expr(int value);  // NOLINT(google-explicit-constructor)
  Expr(Rational value);  // NOLINT(google-explicit-constructor)

  static Expr symbol(Sym s);

  Kind kind() const;
  bool is_rational() const { return kind() == Kind::Rational; }
  bool is_zero() const;
  bool is_one() const;

  /// Value of a Rational node.
  const Rational& value() const;
  /// Symbol of a Var or Const node.
  Sym sym() const;
  std::span<const Expr> children() const;
  /// Base and exponent of a Power node.
  const Expr& base() const;
  const Rational& exponent() const;
  /// Single argument of a unary function node.
  const Expr& arg() const;

  std::size_t hash() const;
  /// Symbols referenced anywhere in the tree.
  const SymSet& symbols() const;
  bool depends_on(Sym s) const { return symbols().test(index(s)); }
  /// Identity of the shared node; stable while any handle is alive.
  const Node* id() const { return node_.get(); }
  std::size_t tree_size() const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;

  friend Expr make_node(Kind, Sym, Rational, std::vector<Expr>);
};

struct Node {
  Kind kind;
  Sym sym;
  Rational value;
  std::vector<Expr> children;
  std::size_t hash;
  SymSet symbols;
  std::size_t size;
};

/// Total order used for canonical child ordering. Negative, zero or positive.
int compare(const Expr& a, const Expr& b);

struct ExprHash {
  std::size_t operator()(const Expr& e) const noexcept { return e.hash(); }
};

// Canonicalizing builders.
Expr make_sum(std::vector<Expr> terms);
Expr make_product(std::vector<Expr> factors);
Expr make_power(const Expr& base, const Rational& exponent);
Expr make_unary(Kind kind, const Expr& arg);
Expr make_atan2(const Expr& y, const Expr& x);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr& operator+=(Expr& a, const Expr& b);
Expr& operator-=(Expr& a, const Expr& b);
Expr& operator*=(Expr& a, const Expr& b);

Expr pow(const Expr& base, const Rational& exponent);
Expr sqrt(const Expr& e);
Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr sinh(const Expr& e);
Expr cosh(const Expr& e);
Expr atan(const Expr& e);
Expr atan2(const Expr& y, const Expr& x);

namespace sym {
inline Expr x() { return Expr::symbol(Sym::x); }
inline Expr u() { return Expr::symbol(Sym::u); }
inline Expr du() { return Expr::symbol(Sym::du); }
inline Expr ddu() { return Expr::symbol(Sym::ddu); }
inline Expr f() { return Expr::symbol(Sym::f); }
inline Expr g() { return Expr::symbol(Sym::g); }
inline Expr df() { return Expr::symbol(Sym::df); }
inline Expr dg() { return Expr::symbol(Sym::dg); }
inline Expr ddf() { return Expr::symbol(Sym::ddf); }
inline Expr ddg() { return Expr::symbol(Sym::ddg); }
inline Expr A() { return Expr::symbol(Sym::A); }
inline Expr b() { return Expr::symbol(Sym::b); }
inline Expr pi() { return Expr::symbol(Sym::pi); }
inline Expr i() { return Expr::symbol(Sym::i); }
}  // namespace sym

/// Splits c*rest into (c, rest); (1, e) when e carries no rational coefficient.
std::pair<Rational, Expr> split_coefficient(const Expr& e);

/// Replaces symbols by expressions, rebuilding canonically.
Expr substitute(const Expr& e, const std::map<Sym, Expr>& replacements);

/// Ordered set of variable names an expression may reference.
class VarContext {
 public:
  VarContext(std::initializer_list<Sym> names);

  static const VarContext& complex_jet();  // x, u, du, ddu
  static const VarContext& real_jet();     // x, f, g, df, dg, ddf, ddg
  static const VarContext& complex_base(); // x, u
  static const VarContext& real_base();    // x, f, g

  bool contains(Sym s) const { return mask_.test(index(s)); }
  /// True when every variable of e belongs to this context (constants are free).
  bool covers(const Expr& e) const;
  /// Throws ContextError naming `what` when e escapes the context.
  void require(const Expr& e, std::string_view what) const;
  const std::vector<Sym>& names() const { return names_; }
  std::string describe() const;

 private:
  std::vector<Sym> names_;
  SymSet mask_;
};

/// Pretty-printer in the text grammar; parse(to_string(e)) == e.
std::string to_string(const Expr& e);
std::ostream& operator<<(std::ostream& os, const Expr& e);

std::string to_string(const Rational& r);

}  // namespace noetherkit
