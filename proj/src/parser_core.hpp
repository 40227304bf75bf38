#pragma once

// Recursive-descent parser shared by the expression and operator grammars.
// The Builder supplies the value type and the semantic actions.

#include <cctype>
#include <string>
#include <string_view>
#include <utility>

#include "heis/errors.hpp"
#include "heis/scalar.hpp"

namespace heis::detail {

template <class Builder>
class Parser {
 public:
  using Value = typename Builder::Value;

  Parser(std::string_view text, Builder& builder) : text_(text), b_(builder) {}

  Value parse() {
    Value v = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Value expr() {
    Value v = term();
    while (true) {
      if (accept('+')) {
        v = b_.add(std::move(v), term());
      } else if (accept('-')) {
        v = b_.sub(std::move(v), term());
      } else {
        return v;
      }
    }
  }

  Value term() {
    Value v = factor();
    while (true) {
      if (accept('*')) {
        v = b_.mul(std::move(v), factor());
      } else if (accept('/')) {
        std::size_t at = pos_;
        Value d = factor();
        v = b_.div(std::move(v), std::move(d), at);
      } else {
        return v;
      }
    }
  }

  Value factor() {
    if (accept('-')) return b_.neg(factor());
    if (accept('+')) return factor();
    return power();
  }

  Value power() {
    Value base = atom();
    if (!accept('^')) return base;
    skip_ws();
    bool negative = accept('-');
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    if (pos_ - start > 6) fail("exponent too large");
    int e = std::stoi(std::string(text_.substr(start, pos_ - start)));
    return b_.pow(std::move(base), negative ? -e : e, start);
  }

  Value atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Value v = expr();
      expect(')');
      return v;
    }
    if (c == '[') {
      ++pos_;
      std::size_t at = pos_;
      Value a = expr();
      expect(',');
      Value bv = expr();
      expect(']');
      return b_.bracket(std::move(a), std::move(bv), at);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
      try {
        return b_.number(Scalar::from_string(std::string(text_.substr(start, pos_ - start))));
      } catch (const std::invalid_argument&) {
        pos_ = start;
        fail("malformed number");
      }
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '(' && b_.is_function(name)) {
        ++pos_;
        Value arg = expr();
        expect(')');
        return b_.call(name, std::move(arg), start);
      }
      return b_.identifier(name, start);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Builder& b_;
};

}  // namespace heis::detail
