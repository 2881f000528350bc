#pragma once

#include <map>
#include <string_view>

#include "noetherkit/expr.hpp"

namespace noetherkit {

/// Partial derivative with respect to a variable symbol.
Expr diff(const Expr& e, Sym v);
/// Same, looking the variable up by name; unknown names raise ContextError.
Expr diff(const Expr& e, std::string_view v);

/// Map from highest-derivative symbols (ddu, or ddf and ddg) to their
/// on-shell right-hand sides.
using Substitution = std::map<Sym, Expr>;

/// On-shell total derivative d/dx. The jet (complex or real) is inferred
/// from the variables of e; mixing both raises ContextError, as does a
/// first-derivative dependence without a matching rhs entry. Expressions
/// that already contain second derivatives are rejected.
Expr total_derivative(const Expr& e, const Substitution& rhs);

/// Off-shell total derivative on the base point (x, u) or (x, f, g): no first
/// derivatives may appear in e, the result is linear in them.
Expr free_total_derivative(const Expr& e);

enum class Jet { None, Complex, Real };
/// Which jet an expression lives on; throws ContextError when it mixes both.
Jet jet_of(const Expr& e);

}  // namespace noetherkit
