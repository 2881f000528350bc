#include "noetherkit/parse.hpp"

#include <cctype>
#include <algorithm>
#include <charconv>
#include <vector>

namespace noetherkit {

namespace {

// A few common Unicode spellings are folded to their ASCII equivalents before
// parsing; offsets into the original text are kept for error positions.
struct Normalized {
  std::string ascii;
  std::vector<std::size_t> origin;
};

Normalized normalize(std::string_view text) {
  static const std::pair<std::string_view, std::string_view> kFolds[] = {
      {"\u2212", "-"}, {"\u00b7", "*"}, {"\u00d7", "*"}, {"\u2032", "'"},
      {"\u2033", "''"}, {"\u03c0", "pi"}, {"\u2019", "'"},
  };
  Normalized out;
  std::size_t k = 0;
  while (k < text.size()) {
    bool folded = false;
    for (const auto& [from, to] : kFolds) {
      if (text.substr(k, from.size()) == from) {
        for (char c : to) {
          out.ascii.push_back(c);
          out.origin.push_back(k);
        }
        k += from.size();
        folded = true;
        break;
      }
    }
    if (!folded) {
      out.ascii.push_back(text[k]);
      out.origin.push_back(k);
      ++k;
    }
  }
  out.origin.push_back(text.size());
  return out;
}

class Parser {
 public:
  Parser(std::string_view original, const Normalized& norm)
      : original_(original), text_(norm.ascii), origin_(norm.origin) {}

  Expr run() {
    skip_space();
    if (at_end()) fail("empty expression");
    Expr e = expression();
    skip_space();
    if (!at_end()) fail(std::string("unexpected '") + peek() + "'");
    return e;
  }

 private:
  std::string_view original_;
  std::string_view text_;
  const std::vector<std::size_t>& origin_;
  std::size_t pos_ = 0;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, pos_); }

  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
    int line = 1;
    int col = 1;
    std::size_t end = origin_[std::min(at, origin_.size() - 1)];
    for (std::size_t k = 0; k < end && k < original_.size(); ++k) {
      auto c = static_cast<unsigned char>(original_[k]);
      if (c == '\n') {
        ++line;
        col = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++col;
      }
    }
    throw ParseError(msg, line, col);
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (at_end()) fail(std::string("expected '") + c + "' but input ended");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expr expression() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + term();
      } else if (accept('-')) {
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * unary();
      } else if (accept('/')) {
        lhs = lhs / unary();
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = atom();
    skip_space();
    if (peek() == '^') {
      std::size_t at = pos_;
      ++pos_;
      Expr ex = unary();
      if (!ex.is_rational()) fail_at("exponent must be a rational constant", at);
      return make_power(base, ex.value());
    }
    return base;
  }

  Expr number() {
    std::size_t start = pos_;
    std::int64_t mantissa = 0;
    std::int64_t scale = 0;  // power of ten applied to mantissa
    bool digits = false;
    auto take_digit = [&](char c) {
      if (mantissa > (INT64_MAX - 9) / 10) fail_at("numeric literal too large", start);
      mantissa = mantissa * 10 + (c - '0');
      digits = true;
    };
    while (std::isdigit(static_cast<unsigned char>(peek()))) take_digit(text_[pos_++]);
    if (peek() == '.') {
      ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        take_digit(text_[pos_++]);
        --scale;
      }
    }
    if (!digits) fail_at("malformed number", start);
    if (peek() == 'e' || peek() == 'E') {
      std::size_t save = pos_;
      ++pos_;
      bool neg = false;
      if (peek() == '+' || peek() == '-') neg = text_[pos_++] == '-';
      if (!std::isdigit(static_cast<unsigned char>(peek()))) {
        pos_ = save;  // not an exponent; leave 'e' for the caller
      } else {
        int ex = 0;
        auto [p, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), ex);
        if (ec != std::errc()) fail_at("malformed exponent", start);
        pos_ = static_cast<std::size_t>(p - text_.data());
        scale += neg ? -ex : ex;
      }
    }
    if (scale > 18 || scale < -18) fail_at("numeric literal out of range", start);
    std::int64_t p10 = 1;
    for (std::int64_t k = 0; k < (scale < 0 ? -scale : scale); ++k) p10 *= 10;
    if (scale >= 0) {
      if (mantissa != 0 && mantissa > INT64_MAX / p10) fail_at("numeric literal too large", start);
      return Expr(Rational(mantissa * p10));
    }
    return Expr(Rational(mantissa, p10));
  }

  Expr atom() {
    skip_space();
    if (at_end()) fail("unexpected end of input");
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      Expr e = expression();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (static_cast<unsigned char>(c) >= 0x80) fail("unexpected non-ASCII character");
    fail(std::string("unexpected '") + c + "'");
  }

  Expr identifier() {
    std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    int primes = 0;
    while (peek() == '\'') {
      ++pos_;
      ++primes;
    }
    if (primes > 0) {
      if ((name != "u" && name != "f" && name != "g") || primes > 2) {
        fail_at("unknown identifier '" + std::string(text_.substr(start, pos_ - start)) + "'", start);
      }
      name = std::string(static_cast<std::size_t>(primes), 'd') + name;
    }
    skip_space();
    if (peek() == '(') {
      ++pos_;
      return call(name, start);
    }
    if (auto s = sym_from_name(name)) return Expr::symbol(*s);
    static const char* const kFunctions[] = {"exp", "log", "ln", "sin", "cos", "sinh",
                                             "cosh", "atan", "arctan", "atan2", "sqrt"};
    for (const char* fn : kFunctions) {
      if (name == fn) fail_at("function '" + name + "' requires an argument list", start);
    }
    fail_at("unknown identifier '" + name + "'", start);
  }

  Expr call(const std::string& name, std::size_t start) {
    Expr a = expression();
    if (name == "atan2") {
      expect(',');
      Expr b = expression();
      expect(')');
      return make_atan2(a, b);
    }
    expect(')');
    if (name == "exp") return exp(a);
    if (name == "log" || name == "ln") return log(a);
    if (name == "sin") return sin(a);
    if (name == "cos") return cos(a);
    if (name == "sinh") return sinh(a);
    if (name == "cosh") return cosh(a);
    if (name == "atan" || name == "arctan") return atan(a);
    if (name == "sqrt") return sqrt(a);
    fail_at("unknown function '" + name + "'", start);
  }
};

}  // namespace

Expr parse(std::string_view text) {
  Normalized norm = normalize(text);
  return Parser(text, norm).run();
}

}  // namespace noetherkit
