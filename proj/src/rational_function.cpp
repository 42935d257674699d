#include "casimir/rational_function.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace casimir {

RationalFunction::RationalFunction(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) throw InvalidArgument("division by zero");
  if (num.is_zero()) {
    den_ = Polynomial(1);
    return;
  }
  if (den.is_constant()) {
    num_ = num * (Rational(1) / den.constant_value());
    den_ = Polynomial(1);
    return;
  }
  Polynomial g = gcd(num, den);
  Polynomial n = g.is_constant() ? num : *divide_exact(num, g);
  Polynomial d = g.is_constant() ? den : *divide_exact(den, g);
  Rational lc = d.leading_coefficient();
  if (lc != 1) {
    n *= Rational(1) / lc;
    d *= Rational(1) / lc;
  }
  num_ = std::move(n);
  den_ = std::move(d);
}

Rational RationalFunction::constant_value() const {
  return num_.constant_value() / den_.constant_value();
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    if (den_.is_constant()) {
      num_ += o.num_;
      return *this;
    }
    return *this = RationalFunction(num_ + o.num_, den_);
  }
  Polynomial g = gcd(den_, o.den_);
  Polynomial b = *divide_exact(den_, g);
  Polynomial d = *divide_exact(o.den_, g);
  return *this = RationalFunction(num_ * d + o.num_ * b, b * o.den_);
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& o) { return *this += -o; }

RationalFunction& RationalFunction::operator*=(const RationalFunction& o) {
  if (is_zero() || o.is_zero()) return *this = RationalFunction();
  if (den_.is_constant() && o.den_.is_constant()) {
    num_ = num_ * o.num_;
    return *this;
  }
  Polynomial g1 = gcd(num_, o.den_);
  Polynomial g2 = gcd(o.num_, den_);
  Polynomial a = g1.is_constant() ? num_ : *divide_exact(num_, g1);
  Polynomial d = g1.is_constant() ? o.den_ : *divide_exact(o.den_, g1);
  Polynomial c = g2.is_constant() ? o.num_ : *divide_exact(o.num_, g2);
  Polynomial b = g2.is_constant() ? den_ : *divide_exact(den_, g2);
  Polynomial den = b * d;
  Polynomial num = a * c;
  Rational lc = den.leading_coefficient();
  if (lc != 1) {
    num *= Rational(1) / lc;
    den *= Rational(1) / lc;
  }
  *this = RationalFunction(std::move(num), std::move(den), Reduced{});
  return *this;
}

RationalFunction& RationalFunction::operator/=(const RationalFunction& o) {
  return *this *= o.reciprocal();
}

RationalFunction operator-(const RationalFunction& a) {
  return RationalFunction(-a.num_, a.den_, RationalFunction::Reduced{});
}

RationalFunction RationalFunction::reciprocal() const {
  if (is_zero()) throw InvalidArgument("division by zero");
  Rational lc = num_.leading_coefficient();
  Rational inv = Rational(1) / lc;
  return RationalFunction(den_ * inv, num_ * inv, Reduced{});
}

RationalFunction RationalFunction::pow(int k) const {
  if (k < 0) return reciprocal().pow(-k);
  RationalFunction result(1);
  RationalFunction base = *this;
  while (k > 0) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return result;
}

std::vector<Atom> RationalFunction::atoms() const {
  auto a = num_.atoms();
  for (const auto& x : den_.atoms()) {
    if (std::find(a.begin(), a.end(), x) == a.end()) a.push_back(x);
  }
  std::sort(a.begin(), a.end());
  return a;
}

RationalFunction to_rational_function(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return RationalFunction(e.value());
    case Expr::Kind::Symbol:
      return RationalFunction(
          Polynomial(Atom::symbol(e.symbol_index(), e.symbol_name(), e.is_parameter())));
    case Expr::Kind::Sum: {
      RationalFunction acc;
      for (const auto& t : e.operands()) acc += to_rational_function(t);
      return acc;
    }
    case Expr::Kind::Product: {
      RationalFunction acc(1);
      for (const auto& f : e.operands()) acc *= to_rational_function(f);
      return acc;
    }
    case Expr::Kind::Power: {
      RationalFunction b = to_rational_function(e.operands()[0]);
      if (b.is_zero() && e.exponent() < 0) throw InvalidArgument("division by zero");
      return b.pow(e.exponent());
    }
    case Expr::Kind::Log: {
      RationalFunction u = to_rational_function(e.operands()[0]);
      if (u == RationalFunction(1)) return RationalFunction();
      return RationalFunction(Polynomial(Atom::log(to_expr(u))));
    }
  }
  throw InvalidArgument("corrupt expression node");
}

Expr to_expr(const Polynomial& p) {
  std::vector<Expr> terms;
  terms.reserve(p.term_count());
  for (const auto& [m, c] : p.terms()) {
    std::vector<Expr> factors;
    factors.reserve(m.size() + 1);
    if (c != 1) factors.emplace_back(c);
    // Print order inside a term: parameters, state variables, logarithms.
    for (int pass = 0; pass < 3; ++pass) {
      for (const auto& [atom, k] : m) {
        const int group = atom.is_log() ? 2 : (atom.is_parameter() ? 0 : 1);
        if (group == pass) factors.push_back(Expr::power(atom.to_expr(), k));
      }
    }
    terms.push_back(Expr::product(std::move(factors)));
  }
  return Expr::sum(std::move(terms));
}

Expr to_expr(const RationalFunction& f) {
  if (f.is_polynomial()) return to_expr(f.numerator());
  return Expr::product({to_expr(f.numerator()), Expr::power(to_expr(f.denominator()), -1)});
}

namespace {

RationalFunction atom_derivative(const Atom& atom, std::size_t index) {
  if (atom.is_symbol()) return RationalFunction(atom.index() == index ? 1 : 0);
  RationalFunction u = to_rational_function(atom.argument());
  RationalFunction du = derivative(u, index);
  if (du.is_zero()) return du;
  return du / u;
}

RationalFunction polynomial_derivative(const Polynomial& p, std::size_t index) {
  RationalFunction out;
  for (const auto& atom : p.atoms()) {
    RationalFunction da = atom_derivative(atom, index);
    if (da.is_zero()) continue;
    out += RationalFunction(p.partial(atom)) * da;
  }
  return out;
}

}  // namespace

RationalFunction derivative(const RationalFunction& f, std::size_t index) {
  RationalFunction dn = polynomial_derivative(f.numerator(), index);
  if (f.is_polynomial()) return dn;
  RationalFunction dd = polynomial_derivative(f.denominator(), index);
  RationalFunction den(f.denominator());
  return (dn * den - RationalFunction(f.numerator()) * dd) / (den * den);
}

bool depends_on(const RationalFunction& f, std::size_t index) {
  for (const auto& atom : f.atoms()) {
    if (atom.is_symbol() && atom.index() == index) return true;
    if (atom.is_log()) {
      auto syms = free_symbols(atom.argument());
      if (std::find(syms.begin(), syms.end(), index) != syms.end()) return true;
    }
  }
  return false;
}

bool depends_on_state(const RationalFunction& f, const VariableSet& vars) {
  for (std::size_t i = 0; i < vars.dim(); ++i) {
    if (depends_on(f, i)) return true;
  }
  return false;
}

double evaluate(const Atom& atom, const Point<double>& point) {
  if (atom.is_symbol()) {
    if (static_cast<Eigen::Index>(atom.index()) >= point.size()) {
      throw EvalError("point does not assign symbol '" + atom.name() + "'");
    }
    return point(static_cast<Eigen::Index>(atom.index()));
  }
  const double arg = eval<double>(atom.argument(), point);
  if (!(arg > 0)) throw EvalError("ln of a non-positive value");
  return std::log(arg);
}

namespace {

template <typename Combine>
double evaluate_terms(const Polynomial& p, const Point<double>& point, Combine combine) {
  double acc = 0;
  for (const auto& [m, c] : p.terms()) {
    double t = c.get_d();
    for (const auto& [atom, k] : m) t *= std::pow(evaluate(atom, point), k);
    acc += combine(t);
  }
  return acc;
}

}  // namespace

double evaluate(const Polynomial& p, const Point<double>& point) {
  return evaluate_terms(p, point, [](double t) { return t; });
}

double evaluate_magnitude(const Polynomial& p, const Point<double>& point) {
  return evaluate_terms(p, point, [](double t) { return std::abs(t); });
}

double evaluate(const RationalFunction& f, const Point<double>& point) {
  const double d = evaluate(f.denominator(), point);
  if (d == 0) throw EvalError("division by zero");
  return evaluate(f.numerator(), point) / d;
}

std::ostream& operator<<(std::ostream& os, const RationalFunction& f) { return os << to_expr(f); }

}  // namespace casimir
