#pragma once

// Infix expression parser producing expanded multilinear polynomials.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary ('*' unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' integer)?
//   primary := integer | identifier | '(' expr ')'
//
// Identifiers must be declared in the supplied Variables table.

#include <cctype>
#include <charconv>
#include <cstddef>
#include <string>
#include <string_view>

#include "hobo/poly.hpp"

namespace hobo {

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error("parse error at position " + std::to_string(position) + ": " + message), position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

namespace detail {

class ExprParser {
 public:
  ExprParser(std::string_view text, const Variables& vars) : text_(text), vars_(vars) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial acc = term();
    for (;;) {
      if (consume('+'))
        acc += term();
      else if (consume('-'))
        acc -= term();
      else
        return acc;
    }
  }

  Polynomial term() {
    Polynomial acc = unary();
    while (consume('*')) acc = acc * unary();
    return acc;
  }

  Polynomial unary() {
    if (consume('-')) return -unary();
    if (consume('+')) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = primary();
    if (!consume('^')) return base;
    skip_ws();
    const std::size_t at = pos_;
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail("expected nonnegative integer exponent");
    const std::uint64_t k = integer_literal();
    if (k > kMaxExponent) throw ParseError(at, "exponent overflow (" + std::to_string(k) + " > 16)");
    return pow(base, static_cast<unsigned>(k));
  }

  Polynomial primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial inner = expr();
      if (!consume(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return Polynomial::constant(static_cast<double>(integer_literal()));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      auto id = vars_.find(name);
      if (!id) throw ParseError(start, "undeclared variable '" + std::string(name) + "'");
      return Polynomial::variable(*id);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::uint64_t integer_literal() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    // literals beyond 2^53 cannot be held exactly as coefficients
    if (ec != std::errc{} || value > (std::uint64_t{1} << 53)) throw ParseError(start, "integer literal too large");
    return value;
  }

  std::string_view text_;
  const Variables& vars_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Polynomial parse_expr(std::string_view text, const Variables& vars) {
  return detail::ExprParser(text, vars).parse();
}

}  // namespace hobo
