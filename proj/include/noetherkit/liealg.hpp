#pragma once

#include <optional>
#include <string>
#include <vector>

#include "noetherkit/symmetry.hpp"

namespace noetherkit {

class DependentBasisError : public Error {
 public:
  using Error::Error;
};

struct NamedField {
  std::string name;
  RealVectorField field;
};

/// Componentwise [X, Y]^k = X(Y^k) - Y(X^k).
RealVectorField lie_bracket(const RealVectorField& X, const RealVectorField& Y);

/// Applies the (unprolonged) field to a function of (x, f, g).
Expr apply(const RealVectorField& X, const Expr& h);

/// "xi*d/dx + eta_f*d/df + eta_g*d/dg" with zero terms dropped; "0" if empty.
std::string to_string(const RealVectorField& X);

struct AlgebraTable {
  struct Entry {
    bool spanned = false;
    std::vector<Rational> coeffs;  // over the basis, when spanned
    RealVectorField bracket;
  };
  struct Residual {
    std::size_t i;
    std::size_t j;
    RealVectorField field;
  };

  std::vector<std::string> names;
  std::vector<RealVectorField> basis;
  /// entries[i][j] for all ordered pairs; entries[i][i] is zero.
  std::vector<std::vector<Entry>> entries;
  bool closed = true;
  /// Brackets (i < j) not in the span of the basis.
  std::vector<Residual> residuals;
  /// True when every coefficient was obtained by exact polynomial matching.
  bool exact = true;

  std::size_t size() const { return basis.size(); }
  const std::vector<Rational>& constants(std::size_t i, std::size_t j) const { return entries[i][j].coeffs; }
  /// Sets c(i,j,.) = v and c(j,i,.) = -v.
  void set_constants(std::size_t i, std::size_t j, const std::vector<Rational>& v);
  /// "[Xi,Xj] = 2*X3 - X1", or the bracket field when it is not spanned.
  std::string format(std::size_t i, std::size_t j) const;
};

/// Expands every pairwise bracket over ops. Polynomial components go through
/// exact rational elimination on monomial coefficients; anything else is
/// fitted on sampled points, snapped to rationals and confirmed by is_zero.
/// Linear independence is checked by numeric rank on 3n sampled points
/// (threshold 1e-9), confirmed by an exact null-vector search when possible.
AlgebraTable structure_constants(const std::vector<NamedField>& ops, const SampleDomain& dom,
                                 const ZeroTestOptions& opts = {});

/// sum over cyclic (i,j,k) of c(i,j,m) c(m,k,l) = 0 for all i,j,k,l, exactly.
/// False for a table that is not closed.
bool check_jacobi(const AlgebraTable& table);

/// Parses "2*X3 - X1", "-X2", "0" over the given names.
std::vector<Rational> parse_combination(const std::string& text, const std::vector<std::string>& names);

struct PrintedBracket {
  std::size_t i;
  std::size_t j;
  std::vector<Rational> coeffs;
};

/// Parses "[X1,X4] = X1" over the given names.
PrintedBracket parse_printed_bracket(const std::string& text, const std::vector<std::string>& names);

/// Differences between a computed table and printed entries, one line each;
/// computed nonzero brackets missing from the printed list are reported too.
std::vector<std::string> compare_with_printed(const AlgebraTable& table, const std::vector<PrintedBracket>& printed);

}  // namespace noetherkit
