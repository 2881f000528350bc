#include "noetherkit/eval.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <unordered_map>

namespace noetherkit {

Point::Point(std::initializer_list<std::pair<Sym, double>> values) {
  for (const auto& [s, v] : values) set(s, v);
}

std::string Point::describe() const {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  os << "{";
  for (std::size_t k = 0; k < kSymCount; ++k) {
    if (!assigned_.test(k)) continue;
    if (!first) os << ", ";
    first = false;
    os << sym_name(static_cast<Sym>(k)) << ": " << value_[k];
  }
  os << "}";
  return os.str();
}

CompiledExpr::CompiledExpr(std::span<const Expr> roots) {
  std::unordered_map<const Node*, std::uint32_t> by_id;
  std::unordered_map<Expr, std::uint32_t, ExprHash> by_value;
  // Iterative post-order so deep trees do not exhaust the stack.
  auto emit = [&](const Expr& root) -> std::uint32_t {
    std::vector<std::pair<Expr, bool>> stack{{root, false}};
    while (!stack.empty()) {
      auto [t, expanded] = stack.back();
      stack.pop_back();
      if (by_id.count(t.id())) continue;
      if (auto it = by_value.find(t); it != by_value.end()) {
        by_id.emplace(t.id(), it->second);
        continue;
      }
      if (!expanded) {
        stack.emplace_back(t, true);
        for (const auto& c : t.children()) {
          if (!by_id.count(c.id())) stack.emplace_back(c, false);
        }
        continue;
      }
      Instr in{t.kind(), Sym::x, 0.0, 0.0, 0, false, static_cast<std::uint32_t>(operands_.size()),
               static_cast<std::uint32_t>(t.children().size()), t};
      for (const auto& c : t.children()) operands_.push_back(by_id.at(c.id()));
      switch (t.kind()) {
        case Kind::Rational:
          in.constant = static_cast<double>(t.value().numerator()) / static_cast<double>(t.value().denominator());
          break;
        case Kind::Const:
        case Kind::Var:
          in.sym = t.sym();
          if (t.sym() == Sym::pi) in.constant = std::numbers::pi;
          break;
        case Kind::Power: {
          const Rational& r = t.exponent();
          in.integral = r.denominator() == 1;
          in.int_exponent = r.numerator();
          in.exponent = static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
          break;
        }
        default:
          break;
      }
      auto slot = static_cast<std::uint32_t>(code_.size());
      code_.push_back(std::move(in));
      by_id.emplace(t.id(), slot);
      by_value.emplace(t, slot);
    }
    return by_id.at(root.id());
  };
  for (const auto& r : roots) {
    roots_.push_back(emit(r));
    symbols_ |= r.symbols();
  }
}

CompiledExpr::Fault CompiledExpr::evaluate(const Point& p, std::span<double> out) const {
  for (std::size_t k = 0; k < kSymCount; ++k) {
    auto s = static_cast<Sym>(k);
    if (symbols_.test(k) && s != Sym::pi && s != Sym::i && !p.has(s)) {
      throw ContextError("evaluation point does not assign '" + std::string(sym_name(s)) + "'");
    }
  }
  std::vector<double> reg(code_.size());
  auto fault = [](const Instr& in, const char* why) {
    return Fault{false, why, in.source};
  };
  for (std::size_t k = 0; k < code_.size(); ++k) {
    const Instr& in = code_[k];
    const std::uint32_t* op = operands_.data() + in.first;
    double v = 0.0;
    switch (in.kind) {
      case Kind::Rational:
        v = in.constant;
        break;
      case Kind::Const:
        if (in.sym == Sym::i) return fault(in, "imaginary unit has no real value");
        v = in.sym == Sym::pi ? in.constant : p[in.sym];
        break;
      case Kind::Var:
        v = p[in.sym];
        break;
      case Kind::Sum:
        for (std::uint32_t j = 0; j < in.count; ++j) v += reg[op[j]];
        break;
      case Kind::Product:
        v = 1.0;
        for (std::uint32_t j = 0; j < in.count; ++j) v *= reg[op[j]];
        break;
      case Kind::Power: {
        double b = reg[op[0]];
        if (b == 0.0 && in.exponent < 0) return fault(in, "division by zero");
        if (in.integral) {
          v = std::pow(b, static_cast<double>(in.int_exponent));
        } else {
          if (b < 0.0) return fault(in, "fractional power of a negative number");
          v = in.exponent == 0.5 ? std::sqrt(b) : std::pow(b, in.exponent);
        }
        break;
      }
      case Kind::Exp:
        v = std::exp(reg[op[0]]);
        break;
      case Kind::Log:
        if (reg[op[0]] <= 0.0) return fault(in, "logarithm of a non-positive number");
        v = std::log(reg[op[0]]);
        break;
      case Kind::Sin:
        v = std::sin(reg[op[0]]);
        break;
      case Kind::Cos:
        v = std::cos(reg[op[0]]);
        break;
      case Kind::Sinh:
        v = std::sinh(reg[op[0]]);
        break;
      case Kind::Cosh:
        v = std::cosh(reg[op[0]]);
        break;
      case Kind::Atan:
        v = std::atan(reg[op[0]]);
        break;
      case Kind::Atan2:
        if (reg[op[0]] == 0.0 && reg[op[1]] == 0.0) return fault(in, "atan2(0, 0) is undefined");
        v = std::atan2(reg[op[0]], reg[op[1]]);
        break;
    }
    if (!std::isfinite(v)) return fault(in, "non-finite value");
    reg[k] = v;
  }
  for (std::size_t r = 0; r < roots_.size() && r < out.size(); ++r) out[r] = reg[roots_[r]];
  return {};
}

double CompiledExpr::operator()(const Point& p) const {
  double v = 0.0;
  Fault f = evaluate(p, std::span<double>(&v, 1));
  if (!f.ok) throw SingularityError(f.reason + " in subterm " + to_string(f.subterm), to_string(f.subterm));
  return v;
}

double eval(const Expr& e, const Point& p) { return CompiledExpr(e)(p); }

}  // namespace noetherkit
