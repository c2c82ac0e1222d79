#include <cctype>

#include "germforge/jet.hpp"

namespace germforge {

namespace {

class JetParser {
 public:
  JetParser(const std::string& text, VarSetPtr vars, Field field, int trunc, int line,
            int column)
      : s_(text), vars_(std::move(vars)), field_(field), trunc_(trunc), line_(line),
        col0_(column) {}

  Jet run() {
    skip();
    if (pos_ >= s_.size()) fail("empty expression");
    Jet r = expr();
    skip();
    if (pos_ < s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, col0_ + static_cast<int>(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool starts_factor() {
    skip();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '(';
  }

  Jet expr() {
    Jet acc = term();
    for (;;) {
      skip();
      if (pos_ >= s_.size()) break;
      char c = s_[pos_];
      if (c == '+') {
        ++pos_;
        acc += term();
      } else if (c == '-') {
        ++pos_;
        acc -= term();
      } else {
        break;
      }
    }
    return acc;
  }

  Jet term() {
    Jet acc = unary();
    for (;;) {
      skip();
      if (pos_ >= s_.size()) break;
      char c = s_[pos_];
      if (c == '*') {
        ++pos_;
        acc = acc * unary();
      } else if (c == '/') {
        ++pos_;
        std::size_t at = pos_;
        Jet d = unary();
        if (d.order().value_or(0) != 0 || d.term_count() != 1 || d.is_zero()) {
          pos_ = at;
          fail("division by a non-constant or zero");
        }
        acc *= d.constant_term().inverse();
      } else if (starts_factor()) {
        acc = acc * unary();
      } else {
        break;
      }
    }
    return acc;
  }

  Jet unary() {
    skip();
    if (pos_ < s_.size() && s_[pos_] == '-') {
      ++pos_;
      return -unary();
    }
    if (pos_ < s_.size() && s_[pos_] == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }

  Jet power() {
    Jet base = atom();
    skip();
    if (pos_ < s_.size() && s_[pos_] == '^') {
      ++pos_;
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a non-negative integer exponent");
      if (pos_ - start > 6) fail("exponent too large");
      return base.pow(std::stoi(s_.substr(start, pos_ - start)));
    }
    return base;
  }

  Jet atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Jet inner = expr();
      skip();
      if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string digits = s_.substr(start, pos_ - start);
      Scalar v = Scalar::parse(field_, digits);
      return Jet::constant(vars_, field_, trunc_, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      auto idx = vars_->index_of(name);
      if (!idx) {
        pos_ = start;
        fail("unknown variable '" + name + "'");
      }
      return Jet::variable(vars_, field_, trunc_, *idx);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  const std::string& s_;
  VarSetPtr vars_;
  Field field_;
  int trunc_;
  int line_;
  int col0_;
  std::size_t pos_ = 0;
};

}  // namespace

Jet parse_jet(const std::string& text, VarSetPtr vars, Field field, int trunc, int line,
              int column) {
  return JetParser(text, std::move(vars), field, trunc, line, column).run();
}

}  // namespace germforge
