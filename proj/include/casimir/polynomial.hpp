#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "casimir/expr.hpp"

namespace casimir {

/// Indeterminate of the polynomial ring: a symbol or ln(argument).
///
/// Atoms are totally ordered: symbols before logarithms, symbols by combined
/// index, logarithms by the smallest symbol index in their argument and then by
/// the printed argument. A smaller atom has higher priority in lex order.
class Atom {
 public:
  static Atom symbol(std::size_t index, std::string name, bool parameter = false);
  /// `argument` must already be normalized.
  static Atom log(Expr argument);

  bool is_symbol() const { return data_->log_argument == std::nullopt; }
  bool is_log() const { return !is_symbol(); }
  bool is_parameter() const { return data_->parameter; }
  std::size_t index() const { return data_->index; }
  const std::string& name() const { return data_->name; }
  const Expr& argument() const { return *data_->log_argument; }

  Expr to_expr() const;

  friend bool operator==(const Atom& a, const Atom& b);
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b);

 private:
  struct Data {
    std::size_t index;
    std::string name;  // symbol name, or printed ln argument
    bool parameter = false;
    std::optional<Expr> log_argument;
  };
  explicit Atom(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
  std::shared_ptr<const Data> data_;
};

/// Power product of atoms, sorted by atom, exponents strictly positive.
using Monomial = std::vector<std::pair<Atom, int>>;

/// Lex comparison: > 0 when `a` precedes `b` (is greater).
int lex_compare(const Monomial& a, const Monomial& b);
Monomial monomial_multiply(const Monomial& a, const Monomial& b);
std::optional<Monomial> monomial_divide(const Monomial& a, const Monomial& b);
Monomial monomial_gcd(const Monomial& a, const Monomial& b);
int degree_of(const Monomial& m, const Atom& atom);

struct LexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return lex_compare(a, b) > 0; }
};

/// Sparse multivariate polynomial with exact rational coefficients. Terms are
/// kept in descending lex order, so begin() is the leading term.
class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational, LexGreater>;

  Polynomial() = default;
  Polynomial(long c);  // NOLINT(google-explicit-constructor)
  Polynomial(const Rational& c);  // NOLINT(google-explicit-constructor)
  explicit Polynomial(const Atom& atom, int exponent = 1);
  Polynomial(Monomial m, Rational c);

  const Terms& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_monomial() const { return terms_.size() == 1; }
  Rational constant_value() const;  // requires is_constant()

  const Monomial& leading_monomial() const { return terms_.begin()->first; }
  const Rational& leading_coefficient() const { return terms_.begin()->second; }

  /// Highest-priority atom present; nullopt for constants.
  std::optional<Atom> main_atom() const;
  std::vector<Atom> atoms() const;
  bool contains(const Atom& atom) const;
  int degree(const Atom& atom) const;
  /// Coefficient of atom^k, as a polynomial free of `atom`.
  Polynomial coefficient(const Atom& atom, int k) const;
  /// Minimum exponents shared by every term.
  Monomial monomial_content() const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator-(Polynomial a) { return a *= Rational(-1); }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

  Polynomial multiply_monomial(const Monomial& m) const;
  std::optional<Polynomial> divide_monomial(const Monomial& m) const;

  /// Scaled so the leading coefficient is 1 (zero stays zero).
  Polynomial monic() const;

  /// d/d(atom), treating every other atom as independent.
  Polynomial partial(const Atom& atom) const;

  std::size_t node_count() const;

 private:
  void add_term(const Monomial& m, const Rational& c);
  Terms terms_;
};

/// Exact quotient a / b, or nullopt if b does not divide a.
std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b);

/// Pseudo-remainder of a by b viewed as univariate in `x`.
Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, const Atom& x);

/// Content with respect to `x`: gcd of the coefficients of powers of x.
Polynomial content(const Polynomial& p, const Atom& x);

/// Monic greatest common divisor over Q.
Polynomial gcd(const Polynomial& a, const Polynomial& b);

}  // namespace casimir
