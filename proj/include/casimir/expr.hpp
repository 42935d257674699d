#pragma once

#include <gmpxx.h>

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "casimir/error.hpp"

namespace casimir {

using Rational = mpq_class;

template <typename Scalar>
using Point = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Ordered state variables followed by ordered parameters. Every symbol is
/// addressed by its combined index: state variables occupy [0, dim()),
/// parameters occupy [dim(), size()).
class VariableSet {
 public:
  VariableSet() = default;
  explicit VariableSet(std::vector<std::string> names, std::vector<std::string> params = {});

  std::size_t dim() const { return names_.size(); }
  std::size_t size() const { return names_.size() + params_.size(); }
  std::size_t param_count() const { return params_.size(); }

  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::string>& params() const { return params_; }

  bool is_state(std::size_t index) const { return index < names_.size(); }
  const std::string& symbol(std::size_t index) const;
  std::optional<std::size_t> index_of(std::string_view name) const;

  friend bool operator==(const VariableSet&, const VariableSet&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<std::string> params_;
};

/// Immutable expression tree. Copies share structure.
class Expr {
 public:
  enum class Kind { Constant, Symbol, Sum, Product, Power, Log };

  Expr();  // canonical zero
  Expr(long value);  // NOLINT(google-explicit-constructor)
  Expr(const Rational& value);  // NOLINT(google-explicit-constructor)

  static Expr symbol(std::size_t index, std::string name, bool parameter = false);
  static Expr symbol(const VariableSet& vars, std::string_view name);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr power(Expr base, int exponent);
  static Expr log(Expr argument);

  Kind kind() const;
  const Rational& value() const;            // Constant
  std::size_t symbol_index() const;         // Symbol
  const std::string& symbol_name() const;   // Symbol
  bool is_parameter() const;                // Symbol
  std::span<const Expr> operands() const;   // Sum, Product, Power (base), Log (argument)
  int exponent() const;                     // Power

  bool is_constant() const { return kind() == Kind::Constant; }
  bool is_zero_literal() const;
  bool is_one_literal() const;

  /// Node-by-node equality. Use is_zero on the difference for mathematical equality.
  bool structurally_equal(const Expr& other) const;

  std::size_t node_count() const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, int exponent);
Expr ln(const Expr& argument);

std::string to_string(const Expr& e);
std::ostream& operator<<(std::ostream& os, const Expr& e);

/// Identifiers bound by name to an expression. Bound names are replaced during
/// parsing, which is how parameter constraints are imposed by substitution.
using Bindings = std::map<std::string, Expr, std::less<>>;

/// Parses `text` and returns the normalized expression.
/// Throws ParseError (with byte offset) or UnknownIdentifier.
Expr parse(std::string_view text, const VariableSet& vars, const Bindings& bindings = {});

/// Canonical form: a quotient of expanded polynomials over symbols and ln
/// atoms, coprime, with a monic denominator. Idempotent.
Expr normalize(const Expr& e);

/// Partial derivative with respect to a state variable, normalized.
/// Throws InvalidArgument if `variable` is a parameter or unknown.
Expr differentiate(const Expr& e, std::size_t variable, const VariableSet& vars);
Expr differentiate(const Expr& e, std::string_view variable, const VariableSet& vars);

/// Symbol indices appearing anywhere in `e` (including inside ln).
std::vector<std::size_t> free_symbols(const Expr& e);
bool depends_on_state(const Expr& e, const VariableSet& vars);

/// Numeric evaluation; `point` is indexed by combined symbol index.
/// Throws EvalError on ln of a non-positive value or division by zero.
template <typename Scalar>
Scalar eval(const Expr& e, const Eigen::Ref<const Point<Scalar>>& point) {
  using std::log;
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return static_cast<Scalar>(e.value().get_num().get_d()) /
             static_cast<Scalar>(e.value().get_den().get_d());
    case Expr::Kind::Symbol:
      if (static_cast<Eigen::Index>(e.symbol_index()) >= point.size()) {
        throw EvalError("point does not assign symbol '" + e.symbol_name() + "'");
      }
      return point(static_cast<Eigen::Index>(e.symbol_index()));
    case Expr::Kind::Sum: {
      Scalar acc(0);
      for (const auto& t : e.operands()) acc += eval<Scalar>(t, point);
      return acc;
    }
    case Expr::Kind::Product: {
      Scalar acc(1);
      for (const auto& f : e.operands()) acc *= eval<Scalar>(f, point);
      return acc;
    }
    case Expr::Kind::Power: {
      const Scalar base = eval<Scalar>(e.operands()[0], point);
      int k = e.exponent();
      if (k < 0 && base == Scalar(0)) throw EvalError("division by zero");
      Scalar acc(1);
      for (int i = 0; i < std::abs(k); ++i) acc *= base;
      return k < 0 ? Scalar(1) / acc : acc;
    }
    case Expr::Kind::Log: {
      const Scalar arg = eval<Scalar>(e.operands()[0], point);
      if (!(arg > Scalar(0))) throw EvalError("ln of a non-positive value");
      return log(arg);
    }
  }
  throw EvalError("corrupt expression node");
}

inline double eval(const Expr& e, const Point<double>& point) { return eval<double>(e, point); }

/// Builds a total point from named values; every symbol must be assigned.
Point<double> make_point(const VariableSet& vars, const std::map<std::string, double, std::less<>>& values);

}  // namespace casimir
