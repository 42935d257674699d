#include <cctype>

#include "casimir/expr.hpp"

namespace casimir {

namespace {

// Grammar (whitespace insignificant between tokens):
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' exponent)?
//   exponent:= ['-'] digits | '(' ['-'] digits ')'
//   primary := number | identifier | 'ln' '(' sum ')' | '(' sum ')'
//   number  := digits | digits '/' digits          (no inner whitespace)
class Parser {
 public:
  Parser(std::string_view text, const VariableSet& vars, const Bindings& bindings)
      : text_(text), vars_(vars), bindings_(bindings) {}

  Expr run() {
    Expr e = sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool at_digit() const {
    return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
  }

  std::string digits() {
    std::size_t start = pos_;
    while (at_digit()) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  Expr sum() {
    std::vector<Expr> terms{product()};
    while (true) {
      if (accept('+')) {
        terms.push_back(product());
      } else if (accept('-')) {
        terms.push_back(-product());
      } else {
        break;
      }
    }
    return Expr::sum(std::move(terms));
  }

  Expr product() {
    std::vector<Expr> factors{unary()};
    while (true) {
      if (accept('*')) {
        factors.push_back(unary());
      } else if (accept('/')) {
        factors.push_back(Expr::power(unary(), -1));
      } else {
        break;
      }
    }
    return Expr::product(std::move(factors));
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!accept('^')) return base;
    skip_space();
    const bool paren = accept('(');
    skip_space();
    bool negative = accept('-');
    skip_space();
    if (!at_digit()) fail("exponent must be an integer literal");
    std::string d = digits();
    if (paren) expect(')');
    if (d.size() > 6) fail("exponent too large");
    int k = std::stoi(d);
    return Expr::power(std::move(base), negative ? -k : k);
  }

  Expr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num = digits();
      if (pos_ + 1 < text_.size() && text_[pos_] == '/' &&
          std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
        ++pos_;
        std::string den = digits();
        mpz_class d(den);
        if (d == 0) fail("zero denominator in rational literal");
        Rational q(mpz_class(num), d);
        q.canonicalize();
        return Expr(q);
      }
      return Expr(Rational(mpz_class(num)));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      std::string name(text_.substr(start, pos_ - start));
      if (name == "ln") {
        expect('(');
        Expr arg = sum();
        expect(')');
        return Expr::log(std::move(arg));
      }
      if (auto it = bindings_.find(name); it != bindings_.end()) return it->second;
      auto idx = vars_.index_of(name);
      if (!idx) throw UnknownIdentifier(name);
      return Expr::symbol(*idx, name, !vars_.is_state(*idx));
    }
    if (c == '(') {
      ++pos_;
      Expr e = sum();
      expect(')');
      return e;
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const VariableSet& vars_;
  const Bindings& bindings_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, const VariableSet& vars, const Bindings& bindings) {
  return normalize(Parser(text, vars, bindings).run());
}

}  // namespace casimir
