#pragma once

#include <Eigen/Core>

#include "casimir/polynomial.hpp"

namespace casimir {

/// Canonical quotient of polynomials: numerator and denominator coprime,
/// denominator with leading coefficient 1, zero represented as 0/1. Two
/// rational functions are mathematically equal (modulo ln identities) iff
/// they compare equal.
class RationalFunction {
 public:
  RationalFunction() : den_(1) {}
  RationalFunction(long c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  RationalFunction(const Rational& c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  RationalFunction(Polynomial p) : num_(std::move(p)), den_(1) {}  // NOLINT(google-explicit-constructor)
  RationalFunction(const Polynomial& num, const Polynomial& den);

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  bool is_polynomial() const { return den_.is_constant(); }
  Rational constant_value() const;

  RationalFunction& operator+=(const RationalFunction& o);
  RationalFunction& operator-=(const RationalFunction& o);
  RationalFunction& operator*=(const RationalFunction& o);
  RationalFunction& operator/=(const RationalFunction& o);

  friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
  friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
  friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { return a *= b; }
  friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { return a /= b; }
  friend RationalFunction operator-(const RationalFunction& a);
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  RationalFunction reciprocal() const;
  RationalFunction pow(int k) const;

  std::vector<Atom> atoms() const;
  std::size_t node_count() const { return num_.node_count() + den_.node_count(); }

 private:
  struct Reduced {};
  RationalFunction(Polynomial num, Polynomial den, Reduced) : num_(std::move(num)), den_(std::move(den)) {}
  Polynomial num_;
  Polynomial den_;
};

RationalFunction to_rational_function(const Expr& e);
Expr to_expr(const RationalFunction& f);
Expr to_expr(const Polynomial& p);

/// Partial derivative with respect to the symbol with combined index `index`.
RationalFunction derivative(const RationalFunction& f, std::size_t index);

/// True if the function involves state variable `index` (directly or via ln).
bool depends_on(const RationalFunction& f, std::size_t index);
bool depends_on_state(const RationalFunction& f, const VariableSet& vars);

/// Evaluates an atom at a point (ln atoms evaluate their argument).
double evaluate(const Atom& atom, const Point<double>& point);
double evaluate(const Polynomial& p, const Point<double>& point);
/// Sum of |term| at the point; the natural scale for relative zero tests.
double evaluate_magnitude(const Polynomial& p, const Point<double>& point);
double evaluate(const RationalFunction& f, const Point<double>& point);

std::ostream& operator<<(std::ostream& os, const RationalFunction& f);

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using SymbolicMatrix = Matrix<RationalFunction>;

}  // namespace casimir

namespace Eigen {

template <>
struct NumTraits<casimir::RationalFunction> : GenericNumTraits<casimir::RationalFunction> {
  using Real = casimir::RationalFunction;
  using NonInteger = casimir::RationalFunction;
  using Nested = casimir::RationalFunction;
  using Literal = casimir::RationalFunction;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 100,
    MulCost = 100
  };
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
