#include "casimir/expr.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <set>
#include <utility>

#include "casimir/rational_function.hpp"

namespace casimir {

namespace {

bool valid_identifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

}  // namespace

VariableSet::VariableSet(std::vector<std::string> names, std::vector<std::string> params)
    : names_(std::move(names)), params_(std::move(params)) {
  if (names_.empty()) throw InvalidArgument("a variable set needs at least one state variable");
  std::set<std::string, std::less<>> seen;
  for (const auto* list : {&names_, &params_}) {
    for (const auto& s : *list) {
      if (!valid_identifier(s)) throw InvalidArgument("invalid identifier '" + s + "'");
      if (s == "ln") throw InvalidArgument("'ln' is reserved");
      if (!seen.insert(s).second) throw InvalidArgument("duplicate identifier '" + s + "'");
    }
  }
}

const std::string& VariableSet::symbol(std::size_t index) const {
  if (index < names_.size()) return names_[index];
  if (index < size()) return params_[index - names_.size()];
  throw InvalidArgument("symbol index out of range");
}

std::optional<std::size_t> VariableSet::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (params_[i] == name) return names_.size() + i;
  }
  return std::nullopt;
}

struct Expr::Node {
  Kind kind = Kind::Constant;
  Rational value;
  std::size_t index = 0;
  std::string name;
  bool parameter = false;
  std::vector<Expr> operands;
  int exponent = 0;
};

Expr::Expr() : Expr(Rational(0)) {}

Expr::Expr(long value) : Expr(Rational(value)) {}

Expr::Expr(const Rational& value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = value;
  node_ = std::move(n);
}

Expr Expr::symbol(std::size_t index, std::string name, bool parameter) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Symbol;
  n->index = index;
  n->name = std::move(name);
  n->parameter = parameter;
  return Expr(std::move(n));
}

Expr Expr::symbol(const VariableSet& vars, std::string_view name) {
  auto idx = vars.index_of(name);
  if (!idx) throw UnknownIdentifier(std::string(name));
  return symbol(*idx, std::string(name), !vars.is_state(*idx));
}

Expr Expr::sum(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  for (auto& t : terms) {
    if (t.kind() == Kind::Sum) {
      for (const auto& s : t.operands()) flat.push_back(s);
    } else if (!t.is_zero_literal()) {
      flat.push_back(std::move(t));
    }
  }
  if (flat.empty()) return Expr();
  if (flat.size() == 1) return flat.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sum;
  n->operands = std::move(flat);
  return Expr(std::move(n));
}

Expr Expr::product(std::vector<Expr> factors) {
  std::vector<Expr> flat;
  for (auto& f : factors) {
    if (f.kind() == Kind::Product) {
      for (const auto& s : f.operands()) flat.push_back(s);
    } else if (!f.is_one_literal()) {
      flat.push_back(std::move(f));
    }
  }
  if (flat.empty()) return Expr(1);
  if (flat.size() == 1) return flat.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Product;
  n->operands = std::move(flat);
  return Expr(std::move(n));
}

Expr Expr::power(Expr base, int exponent) {
  if (exponent == 0) return Expr(1);
  if (exponent == 1) return base;
  if (base.kind() == Kind::Power) {
    return power(base.operands()[0], base.exponent() * exponent);
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Power;
  n->operands = {std::move(base)};
  n->exponent = exponent;
  return Expr(std::move(n));
}

Expr Expr::log(Expr argument) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Log;
  n->operands = {std::move(argument)};
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->value; }
std::size_t Expr::symbol_index() const { return node_->index; }
const std::string& Expr::symbol_name() const { return node_->name; }
bool Expr::is_parameter() const { return node_->parameter; }
std::span<const Expr> Expr::operands() const { return node_->operands; }
int Expr::exponent() const { return node_->exponent; }

bool Expr::is_zero_literal() const { return kind() == Kind::Constant && value() == 0; }
bool Expr::is_one_literal() const { return kind() == Kind::Constant && value() == 1; }

bool Expr::structurally_equal(const Expr& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::Constant:
      return value() == other.value();
    case Kind::Symbol:
      return symbol_index() == other.symbol_index() && symbol_name() == other.symbol_name();
    case Kind::Power:
      if (exponent() != other.exponent()) return false;
      [[fallthrough]];
    default: {
      auto a = operands();
      auto b = other.operands();
      if (a.size() != b.size()) return false;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].structurally_equal(b[i])) return false;
      }
      return true;
    }
  }
}

std::size_t Expr::node_count() const {
  std::size_t n = 1;
  for (const auto& o : operands()) n += o.node_count();
  return n;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, -b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::product({a, Expr::power(b, -1)}); }
Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr(Rational(-a.value()));
  return Expr::product({Expr(-1), a});
}
Expr pow(const Expr& base, int exponent) { return Expr::power(base, exponent); }
Expr ln(const Expr& argument) { return Expr::log(argument); }

// Printing ----------------------------------------------------------------

namespace {

std::string print(const Expr& e);

bool plain_base(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Symbol:
    case Expr::Kind::Log:
      return true;
    case Expr::Kind::Constant:
      return e.value() >= 0 && e.value().get_den() == 1;
    default:
      return false;
  }
}

std::string print_power(const Expr& base, int k) {
  std::string b = print(base);
  if (!plain_base(base)) b = "(" + b + ")";
  return k == 1 ? b : b + "^" + std::to_string(k);
}

/// Prints |e| and reports whether e carries a leading minus sign.
std::pair<bool, std::string> print_signed(const Expr& e) {
  if (e.kind() == Expr::Kind::Constant) {
    Rational v = e.value();
    return {v < 0, Rational(abs(v)).get_str()};
  }
  if (e.kind() != Expr::Kind::Product &&
      !(e.kind() == Expr::Kind::Power && e.exponent() < 0)) {
    return {false, print(e)};
  }

  std::vector<Expr> factors;
  if (e.kind() == Expr::Kind::Product) {
    factors.assign(e.operands().begin(), e.operands().end());
  } else {
    factors.push_back(e);
  }
  Rational coef = 1;
  std::vector<std::string> num;
  std::vector<std::string> den;
  bool den_needs_parens = false;
  for (const auto& f : factors) {
    if (f.kind() == Expr::Kind::Constant) {
      coef *= f.value();
    } else if (f.kind() == Expr::Kind::Power && f.exponent() < 0) {
      const Expr& base = f.operands()[0];
      if (base.kind() == Expr::Kind::Constant) {
        Rational b = base.value();
        for (int i = 0; i < -f.exponent(); ++i) coef /= b;
        continue;
      }
      if (base.kind() == Expr::Kind::Product && f.exponent() == -1) {
        den.push_back(print(base));
        den_needs_parens = true;
      } else if (base.kind() == Expr::Kind::Sum && f.exponent() == -1) {
        den.push_back("(" + print(base) + ")");
      } else {
        den.push_back(print_power(base, -f.exponent()));
      }
    } else if (f.kind() == Expr::Kind::Sum) {
      num.push_back("(" + print(f) + ")");
    } else {
      num.push_back(print(f));
    }
  }
  const bool negative = coef < 0;
  coef = abs(coef);
  if (coef.get_num() != 1 || num.empty()) num.insert(num.begin(), coef.get_num().get_str());
  if (coef.get_den() != 1) den.insert(den.begin(), coef.get_den().get_str());

  std::string out;
  for (std::size_t i = 0; i < num.size(); ++i) out += (i ? "*" : "") + num[i];
  if (!den.empty()) {
    std::string d;
    for (std::size_t i = 0; i < den.size(); ++i) d += (i ? "*" : "") + den[i];
    const bool digit_clash = std::isdigit(static_cast<unsigned char>(out.back())) &&
                             std::isdigit(static_cast<unsigned char>(d.front())) &&
                             !std::all_of(d.begin(), d.end(), ::isdigit);
    if (den.size() > 1 || den_needs_parens || digit_clash) d = "(" + d + ")";
    out += "/" + d;
  }
  return {negative, out};
}

std::string print(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return e.value().get_str();
    case Expr::Kind::Symbol:
      return e.symbol_name();
    case Expr::Kind::Log:
      return "ln(" + print(e.operands()[0]) + ")";
    case Expr::Kind::Power:
      if (e.exponent() < 0) {
        auto [neg, s] = print_signed(e);
        return neg ? "-" + s : s;
      }
      return print_power(e.operands()[0], e.exponent());
    case Expr::Kind::Product: {
      auto [neg, s] = print_signed(e);
      return neg ? "-" + s : s;
    }
    case Expr::Kind::Sum: {
      std::string out;
      bool first = true;
      for (const auto& t : e.operands()) {
        auto [neg, s] = print_signed(t);
        if (first) {
          out = neg ? "-" + s : s;
        } else {
          out += neg ? " - " : " + ";
          out += s;
        }
        first = false;
      }
      return out;
    }
  }
  return "?";
}

void collect_symbols(const Expr& e, std::set<std::size_t>& out) {
  if (e.kind() == Expr::Kind::Symbol) {
    out.insert(e.symbol_index());
    return;
  }
  for (const auto& o : e.operands()) collect_symbols(o, out);
}

}  // namespace

std::string to_string(const Expr& e) { return print(e); }

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << print(e); }

std::vector<std::size_t> free_symbols(const Expr& e) {
  std::set<std::size_t> s;
  collect_symbols(e, s);
  return {s.begin(), s.end()};
}

bool depends_on_state(const Expr& e, const VariableSet& vars) {
  for (auto i : free_symbols(e)) {
    if (vars.is_state(i)) return true;
  }
  return false;
}

Expr normalize(const Expr& e) { return to_expr(to_rational_function(e)); }

Expr differentiate(const Expr& e, std::size_t variable, const VariableSet& vars) {
  if (variable >= vars.size()) throw InvalidArgument("unknown differentiation variable");
  if (!vars.is_state(variable)) {
    throw InvalidArgument("cannot differentiate with respect to parameter '" +
                          vars.symbol(variable) + "'");
  }
  return to_expr(derivative(to_rational_function(e), variable));
}

Expr differentiate(const Expr& e, std::string_view variable, const VariableSet& vars) {
  auto idx = vars.index_of(variable);
  if (!idx) throw UnknownIdentifier(std::string(variable));
  return differentiate(e, *idx, vars);
}

Point<double> make_point(const VariableSet& vars,
                         const std::map<std::string, double, std::less<>>& values) {
  Point<double> p(static_cast<Eigen::Index>(vars.size()));
  for (std::size_t i = 0; i < vars.size(); ++i) {
    auto it = values.find(vars.symbol(i));
    if (it == values.end()) throw InvalidArgument("point leaves '" + vars.symbol(i) + "' unassigned");
    p(static_cast<Eigen::Index>(i)) = it->second;
  }
  for (const auto& [name, v] : values) {
    if (!vars.index_of(name)) throw UnknownIdentifier(name);
  }
  return p;
}

}  // namespace casimir
