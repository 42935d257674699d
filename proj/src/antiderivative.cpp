#include "casimir/antiderivative.hpp"

#include <algorithm>

namespace casimir {

namespace {

// Univariate polynomial in x over the field of the remaining atoms; entry k is
// the coefficient of x^k, trimmed so the last entry is nonzero.
using UPoly = std::vector<RationalFunction>;

void trim(UPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

int deg(const UPoly& p) { return static_cast<int>(p.size()) - 1; }

UPoly add(UPoly a, const UPoly& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  trim(a);
  return a;
}

UPoly scale(UPoly a, const RationalFunction& c) {
  if (c.is_zero()) return {};
  for (auto& x : a) x *= c;
  return a;
}

UPoly sub(const UPoly& a, const UPoly& b) { return add(a, scale(b, RationalFunction(-1))); }

UPoly mul(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!b[j].is_zero()) out[i + j] += a[i] * b[j];
    }
  }
  trim(out);
  return out;
}

UPoly diff(const UPoly& a) {
  UPoly out;
  for (std::size_t i = 1; i < a.size(); ++i) out.push_back(a[i] * RationalFunction(static_cast<long>(i)));
  trim(out);
  return out;
}

std::pair<UPoly, UPoly> divmod(UPoly a, const UPoly& b) {
  if (b.empty()) throw InvalidArgument("polynomial division by zero");
  UPoly q;
  const RationalFunction inv = b.back().reciprocal();
  while (deg(a) >= deg(b)) {
    const auto shift = static_cast<std::size_t>(deg(a) - deg(b));
    const RationalFunction c = a.back() * inv;
    if (q.size() < shift + 1) q.resize(shift + 1);
    q[shift] = c;
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= c * b[j];
    a.pop_back();
    trim(a);
  }
  trim(q);
  return {q, a};
}

UPoly exact_quotient(const UPoly& a, const UPoly& b) {
  auto [q, r] = divmod(a, b);
  if (!r.empty()) throw AntiderivativeOutsideClass("inexact polynomial division during reduction");
  return q;
}

UPoly monic(UPoly a) {
  if (a.empty()) return a;
  return scale(std::move(a), a.back().reciprocal());
}

UPoly gcd(UPoly a, UPoly b) {
  while (!b.empty()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(std::move(a));
}

// s·a + t·b = c with deg s < deg b; c must be a multiple of gcd(a, b).
std::pair<UPoly, UPoly> diophantine(const UPoly& a, const UPoly& b, const UPoly& c) {
  UPoly r0 = a, r1 = b;
  UPoly s0{RationalFunction(1)}, s1;
  UPoly t0, t1{RationalFunction(1)};
  while (!r1.empty()) {
    auto [q, r] = divmod(r0, r1);
    UPoly s2 = sub(s0, mul(q, s1));
    UPoly t2 = sub(t0, mul(q, t1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  // r0 = s0·a + t0·b is the (non-monic) gcd.
  auto [q, rem] = divmod(c, r0);
  if (!rem.empty()) throw AntiderivativeOutsideClass("no solution to the reduction equation");
  UPoly s = mul(q, s0);
  UPoly t = mul(q, t0);
  if (!s.empty() && deg(s) >= deg(b)) {
    auto [q2, r2] = divmod(s, b);
    s = std::move(r2);
    t = add(t, mul(q2, a));
  }
  return {s, t};
}

UPoly to_upoly(const Polynomial& p, const Atom& x) {
  UPoly out(static_cast<std::size_t>(p.degree(x) + 1));
  for (int k = 0; k <= p.degree(x); ++k) out[static_cast<std::size_t>(k)] = RationalFunction(p.coefficient(x, k));
  trim(out);
  return out;
}

RationalFunction from_upoly(const UPoly& p, const Atom& x) {
  RationalFunction out;
  const RationalFunction xf{Polynomial(x)};
  RationalFunction power(1);
  for (const auto& c : p) {
    if (!c.is_zero()) out += c * power;
    power *= xf;
  }
  return out;
}

RationalFunction integrate_polynomial(const UPoly& p, const Atom& x) {
  UPoly out(p.size() + 1);
  for (std::size_t k = 0; k < p.size(); ++k) out[k + 1] = p[k] / RationalFunction(static_cast<long>(k + 1));
  trim(out);
  return from_upoly(out, x);
}

RationalFunction log_of(const UPoly& p, const Atom& x) {
  return to_rational_function(Expr::log(to_expr(from_upoly(p, x))));
}

// a/d with d squarefree and monic, deg a < deg d.
RationalFunction log_part(const UPoly& a, const UPoly& d, const Atom& x) {
  if (a.empty()) return {};
  if (deg(d) == 1) return a[0] * log_of(d, x);
  auto [k, rem] = divmod(a, diff(d));
  if (rem.empty() && deg(k) == 0) return k[0] * log_of(d, x);
  if (d[0].is_zero()) {
    // d = x·e: split off α/x with α = a(0)/e(0).
    UPoly e(d.begin() + 1, d.end());
    if (!e.empty() && !e[0].is_zero()) {
      const RationalFunction alpha = a.empty() ? RationalFunction() : a[0] / e[0];
      UPoly rest = sub(a, scale(e, alpha));  // divisible by x
      if (!rest.empty() && !rest[0].is_zero()) throw AntiderivativeOutsideClass("partial fraction split failed");
      UPoly b = rest.empty() ? UPoly{} : UPoly(rest.begin() + 1, rest.end());
      return alpha * log_of(UPoly{RationalFunction(), RationalFunction(1)}, x) + log_part(b, e, x);
    }
  }
  throw AntiderivativeOutsideClass("logarithmic part needs an algebraic extension: " +
                                   to_string(to_expr(from_upoly(a, x) / from_upoly(d, x))));
}

bool log_depends_on(const RationalFunction& f, const Atom& x) {
  for (const auto& atom : f.atoms()) {
    if (!atom.is_log()) continue;
    auto syms = free_symbols(atom.argument());
    if (std::find(syms.begin(), syms.end(), x.index()) != syms.end()) return true;
  }
  return false;
}

}  // namespace

RationalFunction antiderivative(const RationalFunction& f, const Atom& x) {
  if (!x.is_symbol()) throw InvalidArgument("integration variable must be a symbol");
  if (f.is_zero()) return {};
  if (log_depends_on(f, x)) {
    throw AntiderivativeOutsideClass("integrand has a logarithm in the integration variable: " +
                                     to_string(to_expr(f)));
  }
  UPoly num = to_upoly(f.numerator(), x);
  UPoly den = to_upoly(f.denominator(), x);
  if (deg(den) == 0) return integrate_polynomial(scale(num, den[0].reciprocal()), x);

  const RationalFunction lc_inv = den.back().reciprocal();
  num = scale(num, lc_inv);
  den = scale(den, lc_inv);
  auto [poly, a] = divmod(num, den);
  RationalFunction result = integrate_polynomial(poly, x);

  // Hermite reduction, linear version.
  UPoly dm = gcd(den, diff(den));
  UPoly ds = exact_quotient(den, dm);
  while (deg(dm) > 0) {
    UPoly dm2 = gcd(dm, diff(dm));
    UPoly dms = exact_quotient(dm, dm2);
    UPoly lhs = scale(exact_quotient(mul(ds, diff(dm)), dm), RationalFunction(-1));
    auto [b, c] = diophantine(lhs, dms, a);
    a = sub(c, exact_quotient(mul(diff(b), ds), dms));
    result += from_upoly(b, x) / from_upoly(dm, x);
    dm = std::move(dm2);
  }
  auto [extra, rem] = divmod(a, ds);
  result += integrate_polynomial(extra, x);
  result += log_part(rem, monic(ds), x);
  return result;
}

}  // namespace casimir
