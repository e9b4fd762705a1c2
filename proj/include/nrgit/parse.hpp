#pragma once

#include <cctype>
#include <stdexcept>
#include <string>

#include "nrgit/polynomial.hpp"

namespace nrgit {

struct ParseError : std::runtime_error {
  size_t line = 0;
  size_t column = 0;
  ParseError(const std::string& msg, size_t l, size_t c)
      : std::runtime_error(msg), line(l), column(c) {}
  std::string where() const { return std::to_string(line) + ":" + std::to_string(column); }
};

// Infix polynomial syntax: + - * ^, parentheses, integer literals and
// division by nonzero constants (so 3/2*x is accepted).
class PolynomialParser {
 public:
  PolynomialParser(const std::string& text, RingPtr ring, size_t line = 1, size_t col0 = 1)
      : s_(text), ring_(std::move(ring)), line_(line), col0_(col0) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip();
    if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col0_ + pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial p = term();
    while (true) {
      if (eat('+'))
        p = p + term();
      else if (eat('-'))
        p = p - term();
      else
        return p;
    }
  }

  Polynomial term() {
    Polynomial p = unary();
    while (true) {
      if (eat('*')) {
        p = p * unary();
      } else if (eat('/')) {
        size_t at = pos_;
        Polynomial d = unary();
        if (!d.is_constant() || d.is_zero()) {
          pos_ = at;
          fail("division only by nonzero constants");
        }
        p = p * (1 / d.constant_term());
      } else {
        return p;
      }
    }
  }

  Polynomial unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = atom();
    if (eat('^')) {
      skip();
      size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      long e = std::stol(s_.substr(start, pos_ - start));
      return base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  Polynomial atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Polynomial::constant(ring_, Rational(Integer(s_.substr(start, pos_ - start))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      auto idx = ring_->index_of(name);
      if (!idx) {
        pos_ = start;
        fail("unknown variable '" + name + "'");
      }
      return Polynomial::variable(ring_, *idx);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string s_;
  RingPtr ring_;
  size_t line_, col0_;
  size_t pos_ = 0;
};

inline Polynomial parse_polynomial(const std::string& text, const RingPtr& ring, size_t line = 1, size_t col = 1) {
  return PolynomialParser(text, ring, line, col).parse();
}

}  // namespace nrgit
