#include "casimir/polynomial.hpp"

#include <algorithm>

namespace casimir {

namespace {

std::size_t smallest_symbol(const Expr& e) {
  auto syms = free_symbols(e);
  return syms.empty() ? static_cast<std::size_t>(-1) : syms.front();
}

}  // namespace

Atom Atom::symbol(std::size_t index, std::string name, bool parameter) {
  return Atom(std::make_shared<const Data>(Data{index, std::move(name), parameter, std::nullopt}));
}

Atom Atom::log(Expr argument) {
  auto key = to_string(argument);
  auto index = smallest_symbol(argument);
  return Atom(std::make_shared<const Data>(Data{index, std::move(key), false, std::move(argument)}));
}

Expr Atom::to_expr() const {
  if (is_symbol()) return Expr::symbol(index(), name(), is_parameter());
  return Expr::log(argument());
}

bool operator==(const Atom& a, const Atom& b) {
  if (a.data_ == b.data_) return true;
  return a.is_symbol() == b.is_symbol() && a.index() == b.index() && a.name() == b.name();
}

std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
  if (a.data_ == b.data_) return std::strong_ordering::equal;
  if (a.is_symbol() != b.is_symbol()) {
    return a.is_symbol() ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (auto c = a.index() <=> b.index(); c != 0) return c;
  return a.name().compare(b.name()) <=> 0;
}

int lex_compare(const Monomial& a, const Monomial& b) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    auto c = a[i].first <=> b[j].first;
    if (c == 0) {
      if (a[i].second != b[j].second) return a[i].second > b[j].second ? 1 : -1;
      ++i;
      ++j;
    } else {
      // The monomial holding the higher-priority atom is larger.
      return c < 0 ? 1 : -1;
    }
  }
  if (i < a.size()) return 1;
  if (j < b.size()) return -1;
  return 0;
}

Monomial monomial_multiply(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

std::optional<Monomial> monomial_divide(const Monomial& a, const Monomial& b) {
  Monomial out;
  std::size_t i = 0;
  for (const auto& [atom, e] : b) {
    while (i < a.size() && a[i].first < atom) out.push_back(a[i++]);
    if (i == a.size() || !(a[i].first == atom) || a[i].second < e) return std::nullopt;
    if (a[i].second > e) out.emplace_back(atom, a[i].second - e);
    ++i;
  }
  while (i < a.size()) out.push_back(a[i++]);
  return out;
}

Monomial monomial_gcd(const Monomial& a, const Monomial& b) {
  Monomial out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    auto c = a[i].first <=> b[j].first;
    if (c == 0) {
      out.emplace_back(a[i].first, std::min(a[i].second, b[j].second));
      ++i;
      ++j;
    } else if (c < 0) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

int degree_of(const Monomial& m, const Atom& atom) {
  for (const auto& [a, e] : m) {
    if (a == atom) return e;
  }
  return 0;
}

Polynomial::Polynomial(long c) {
  if (c != 0) terms_.emplace(Monomial{}, Rational(c));
}

Polynomial::Polynomial(const Rational& c) {
  if (c != 0) terms_.emplace(Monomial{}, c);
}

Polynomial::Polynomial(const Atom& atom, int exponent) {
  if (exponent == 0) {
    terms_.emplace(Monomial{}, Rational(1));
  } else {
    terms_.emplace(Monomial{{atom, exponent}}, Rational(1));
  }
}

Polynomial::Polynomial(Monomial m, Rational c) {
  if (c != 0) terms_.emplace(std::move(m), std::move(c));
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational Polynomial::constant_value() const {
  if (terms_.empty()) return 0;
  return terms_.begin()->second;
}

std::optional<Atom> Polynomial::main_atom() const {
  if (terms_.empty() || leading_monomial().empty()) return std::nullopt;
  return leading_monomial().front().first;
}

std::vector<Atom> Polynomial::atoms() const {
  std::vector<Atom> out;
  for (const auto& [m, c] : terms_) {
    for (const auto& [a, e] : m) {
      if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Polynomial::contains(const Atom& atom) const {
  for (const auto& [m, c] : terms_) {
    if (degree_of(m, atom) > 0) return true;
  }
  return false;
}

int Polynomial::degree(const Atom& atom) const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, degree_of(m, atom));
  return d;
}

Polynomial Polynomial::coefficient(const Atom& atom, int k) const {
  Polynomial out;
  for (const auto& [m, c] : terms_) {
    if (degree_of(m, atom) != k) continue;
    Monomial rest;
    rest.reserve(m.size());
    for (const auto& f : m) {
      if (!(f.first == atom)) rest.push_back(f);
    }
    out.add_term(rest, c);
  }
  return out;
}

Monomial Polynomial::monomial_content() const {
  if (terms_.empty()) return {};
  auto it = terms_.begin();
  Monomial g = it->first;
  for (++it; it != terms_.end() && !g.empty(); ++it) g = monomial_gcd(g, it->first);
  return g;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) out.add_term(monomial_multiply(ma, mb), ca * cb);
  }
  return out;
}

Polynomial Polynomial::multiply_monomial(const Monomial& m) const {
  if (m.empty()) return *this;
  Polynomial out;
  for (const auto& [t, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), monomial_multiply(t, m), c);
  return out;
}

std::optional<Polynomial> Polynomial::divide_monomial(const Monomial& m) const {
  if (m.empty()) return *this;
  Polynomial out;
  for (const auto& [t, c] : terms_) {
    auto q = monomial_divide(t, m);
    if (!q) return std::nullopt;
    out.terms_.emplace_hint(out.terms_.end(), std::move(*q), c);
  }
  return out;
}

Polynomial Polynomial::monic() const {
  if (terms_.empty()) return *this;
  Rational lc = leading_coefficient();
  if (lc == 1) return *this;
  Polynomial out = *this;
  out *= Rational(1) / lc;
  return out;
}

Polynomial Polynomial::partial(const Atom& atom) const {
  Polynomial out;
  for (const auto& [m, c] : terms_) {
    int e = degree_of(m, atom);
    if (e == 0) continue;
    Monomial d;
    d.reserve(m.size());
    for (const auto& f : m) {
      if (f.first == atom) {
        if (f.second > 1) d.emplace_back(f.first, f.second - 1);
      } else {
        d.push_back(f);
      }
    }
    out.add_term(d, c * e);
  }
  return out;
}

std::size_t Polynomial::node_count() const {
  std::size_t n = 0;
  for (const auto& [m, c] : terms_) n += 1 + m.size();
  return n;
}

std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw InvalidArgument("polynomial division by zero");
  if (b.is_monomial()) {
    auto q = a.divide_monomial(b.leading_monomial());
    if (!q) return std::nullopt;
    return *q * (Rational(1) / b.leading_coefficient());
  }
  Polynomial rem = a;
  Polynomial quot;
  const auto& lm = b.leading_monomial();
  const Rational inv_lc = Rational(1) / b.leading_coefficient();
  while (!rem.is_zero()) {
    auto m = monomial_divide(rem.leading_monomial(), lm);
    if (!m) return std::nullopt;
    Polynomial t(std::move(*m), rem.leading_coefficient() * inv_lc);
    quot += t;
    rem -= t * b;
  }
  return quot;
}

Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, const Atom& x) {
  const int db = b.degree(x);
  const Polynomial lcb = b.coefficient(x, db);
  Polynomial r = a;
  int dr = r.degree(x);
  while (!r.is_zero() && dr >= db) {
    Polynomial lcr = r.coefficient(x, dr);
    Polynomial shift = lcr * Polynomial(x, dr - db);
    r = lcb * r - shift * b;
    dr = r.degree(x);
  }
  return r;
}

namespace {

Polynomial gcd_primitive(Polynomial a, Polynomial b, const Atom& x);

Polynomial primitive_part(const Polynomial& p, const Atom& x) {
  Polynomial c = content(p, x);
  if (c.is_constant()) return p.monic();
  auto q = divide_exact(p, c);
  return q->monic();
}

Polynomial gcd_primitive(Polynomial a, Polynomial b, const Atom& x) {
  if (a.degree(x) < b.degree(x)) std::swap(a, b);
  while (!b.is_zero()) {
    Polynomial r = pseudo_remainder(a, b, x);
    a = std::move(b);
    if (r.is_zero()) {
      b = Polynomial();
    } else if (r.degree(x) == 0) {
      // b is primitive in x, so a nonzero x-free remainder means coprime.
      return Polynomial(1);
    } else {
      b = primitive_part(r, x);
    }
  }
  return a.monic();
}

}  // namespace

Polynomial content(const Polynomial& p, const Atom& x) {
  const int d = p.degree(x);
  Polynomial g;
  for (int k = d; k >= 0; --k) {
    Polynomial c = p.coefficient(x, k);
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_constant()) return Polynomial(1);
  }
  return g;
}

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Polynomial(1);
  if (a == b) return a.monic();

  Monomial ma = a.monomial_content();
  Monomial mb = b.monomial_content();
  Monomial m = monomial_gcd(ma, mb);
  Polynomial ra = *a.divide_monomial(ma);
  Polynomial rb = *b.divide_monomial(mb);
  Polynomial mono(m, Rational(1));
  if (ra.is_constant() || rb.is_constant()) return mono;

  Atom x = *ra.main_atom();
  if (auto y = rb.main_atom(); *y < x) x = *y;
  if (!ra.contains(x)) return mono * gcd(ra, content(rb, x));
  if (!rb.contains(x)) return mono * gcd(content(ra, x), rb);

  Polynomial ca = content(ra, x);
  Polynomial cb = content(rb, x);
  Polynomial pa = ca.is_constant() ? ra : *divide_exact(ra, ca);
  Polynomial pb = cb.is_constant() ? rb : *divide_exact(rb, cb);
  Polynomial c = gcd(ca, cb);
  Polynomial g = gcd_primitive(std::move(pa), std::move(pb), x);
  return (mono * c * g).monic();
}

}  // namespace casimir
