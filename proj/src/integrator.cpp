#include "casimir/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "casimir/antiderivative.hpp"

namespace casimir {

const char* to_string(IntegratingFactor::Source s) {
  switch (s) {
    case IntegratingFactor::Source::NotNeeded:
      return "not-needed";
    case IntegratingFactor::Source::ReciprocalCoefficient:
      return "reciprocal-coefficient";
    case IntegratingFactor::Source::MonomialSearch:
      return "monomial-search";
    case IntegratingFactor::Source::Combination:
      return "combination";
  }
  return "?";
}

std::vector<PfaffianForm> build_forms(const StructureMatrix& m, const GammaMatrix& g) {
  std::vector<PfaffianForm> forms;
  for (std::size_t c = 0; c < g.dependent.size(); ++c) {
    PfaffianForm w;
    w.index = g.dependent[c];
    w.coefficients.assign(m.dim(), RationalFunction());
    w.coefficients[w.index] = RationalFunction(1);
    for (std::size_t k = 0; k < g.independent.size(); ++k) {
      w.coefficients[g.independent[k]] = -g.gamma(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c));
    }
    forms.push_back(std::move(w));
  }
  return forms;
}

SymbolicMatrix exactness_defect(const std::vector<RationalFunction>& w) {
  const auto n = static_cast<Eigen::Index>(w.size());
  SymbolicMatrix d(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    d(a, a) = RationalFunction();
    for (Eigen::Index b = a + 1; b < n; ++b) {
      d(a, b) = derivative(w[static_cast<std::size_t>(b)], static_cast<std::size_t>(a)) -
                derivative(w[static_cast<std::size_t>(a)], static_cast<std::size_t>(b));
      d(b, a) = -d(a, b);
    }
  }
  return d;
}

SymbolicMatrix exactness_defect(const PfaffianForm& w) { return exactness_defect(w.coefficients); }

namespace {

std::vector<RationalFunction> times(const std::vector<RationalFunction>& w, const RationalFunction& f) {
  std::vector<RationalFunction> out;
  out.reserve(w.size());
  for (const auto& c : w) out.push_back(c.is_zero() ? c : c * f);
  return out;
}

std::vector<RationalFunction> plus(std::vector<RationalFunction> a, const std::vector<RationalFunction>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

bool grid_is_zero(const SymbolicMatrix& d, const VariableSet& vars, const Domain& domain,
                  const ZeroTestOptions& options) {
  for (Eigen::Index a = 0; a < d.rows(); ++a) {
    for (Eigen::Index b = a + 1; b < d.cols(); ++b) {
      if (!d(a, b).is_zero() && !is_zero(d(a, b), vars, domain, options).zero()) return false;
    }
  }
  return true;
}

RationalFunction monomial(const VariableSet& vars, const std::vector<int>& exps) {
  RationalFunction out(1);
  for (std::size_t j = 0; j < exps.size(); ++j) {
    if (exps[j] != 0) {
      out *= RationalFunction(Polynomial(Atom::symbol(j, vars.symbol(j)))).pow(exps[j]);
    }
  }
  return out;
}

// All exponent vectors in [-range, range]^n, by increasing total degree.
std::vector<std::vector<int>> exponent_vectors(std::size_t n, int range) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(n, -range);
  while (true) {
    out.push_back(e);
    std::size_t i = 0;
    while (i < n && e[i] == range) e[i++] = -range;
    if (i == n) break;
    ++e[i];
  }
  auto l1 = [](const std::vector<int>& v) {
    int s = 0;
    for (int x : v) s += std::abs(x);
    return s;
  };
  std::stable_sort(out.begin(), out.end(),
                   [&](const auto& a, const auto& b) { return l1(a) < l1(b); });
  return out;
}

// Strips parameter-only monomial content and makes the polynomial monic.
Polynomial state_part(const Polynomial& p) {
  Monomial params;
  for (const auto& [atom, k] : p.monomial_content()) {
    if (atom.is_parameter()) params.emplace_back(atom, k);
  }
  Polynomial q = params.empty() ? p : *p.divide_monomial(params);
  return q.monic();
}

std::vector<Polynomial> factors(const Polynomial& p) {
  std::vector<Polynomial> out;
  const Monomial content = p.monomial_content();
  for (const auto& [atom, k] : content) {
    if (!atom.is_parameter()) out.emplace_back(atom, k);
  }
  Polynomial rest = *p.divide_monomial(content);
  if (!rest.is_constant()) out.push_back(state_part(rest));
  return out;
}

std::vector<RationalFunction> coefficient_candidates(const PfaffianForm& w, const VariableSet& vars) {
  std::vector<RationalFunction> out;
  auto add = [&](const RationalFunction& f) {
    if (!depends_on_state(f, vars)) return;
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
  };
  for (std::size_t a = 0; a < w.coefficients.size(); ++a) {
    const auto& c = w.coefficients[a];
    if (a == w.index || c.is_zero() || !depends_on_state(c, vars)) continue;
    const Polynomial num = state_part(c.numerator());
    const Polynomial den = state_part(c.denominator());
    add(RationalFunction(den, num));
    add(RationalFunction(Polynomial(1), num));
    add(RationalFunction(den));
    for (const auto& f : factors(num)) add(RationalFunction(Polynomial(1), f));
    for (const auto& f : factors(den)) add(RationalFunction(f));
  }
  return out;
}

// Values at one probe point of a form and its defect grid.
struct Probe {
  Point<double> point;
  std::vector<double> w;
  Matrix<double> defect;
};

// Defect of φ·ω at a probe from φ, ∇φ and the probe data (product rule).
struct NumericGrid {
  std::vector<double> value;
  std::vector<double> scale;
};

NumericGrid scaled_defect(const Probe& probe, double phi, const std::vector<double>& grad) {
  NumericGrid g;
  const std::size_t n = probe.w.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double t1 = phi * probe.defect(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      const double t2 = grad[a] * probe.w[b];
      const double t3 = grad[b] * probe.w[a];
      g.value.push_back(t1 + t2 - t3);
      g.scale.push_back(std::abs(t1) + std::abs(t2) + std::abs(t3));
    }
  }
  return g;
}

class Prefilter {
 public:
  Prefilter(const VariableSet& vars, const Domain& domain, const EtaOptions& options,
            std::span<const std::vector<RationalFunction>> forms)
      : n_(vars.dim()), tol_(options.prefilter_tol) {
    std::vector<SymbolicMatrix> defects;
    for (const auto& f : forms) defects.push_back(exactness_defect(f));
    Sampler sampler(vars, domain, options.seed);
    Point<double> base;
    int attempts = 0;
    while (static_cast<int>(points_.size()) < options.prefilter_points && attempts++ < 1000) {
      Point<double> p = sampler.next();
      if (!points_.empty()) p.tail(static_cast<Eigen::Index>(vars.param_count())) = base.tail(static_cast<Eigen::Index>(vars.param_count()));
      try {
        std::vector<Probe> probes;
        for (std::size_t f = 0; f < forms.size(); ++f) {
          Probe probe{p, {}, Matrix<double>::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_))};
          for (const auto& c : forms[f]) probe.w.push_back(c.is_zero() ? 0.0 : evaluate(c, p));
          for (Eigen::Index a = 0; a < probe.defect.rows(); ++a) {
            for (Eigen::Index b = a + 1; b < probe.defect.cols(); ++b) {
              const auto& d = defects[f](a, b);
              probe.defect(a, b) = d.is_zero() ? 0.0 : evaluate(d, p);
            }
          }
          probes.push_back(std::move(probe));
        }
        if (points_.empty()) base = p;
        points_.push_back(p);
        probes_.push_back(std::move(probes));
      } catch (const EvalError&) {
        continue;
      }
    }
  }

  std::size_t points() const { return points_.size(); }
  const Point<double>& point(std::size_t i) const { return points_[i]; }
  const Probe& probe(std::size_t point, std::size_t form) const { return probes_[point][form]; }

  // φ = ∏ x_j^{e_j} at point i.
  std::pair<double, std::vector<double>> monomial_at(std::size_t i, const std::vector<int>& e) const {
    double phi = 1;
    for (std::size_t j = 0; j < n_; ++j) phi *= std::pow(points_[i](static_cast<Eigen::Index>(j)), e[j]);
    std::vector<double> grad(n_);
    for (std::size_t j = 0; j < n_; ++j) grad[j] = e[j] * phi / points_[i](static_cast<Eigen::Index>(j));
    return {phi, grad};
  }

  std::pair<double, std::vector<double>> function_at(std::size_t i, const RationalFunction& f) const {
    std::vector<double> grad(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      const RationalFunction d = derivative(f, j);
      grad[j] = d.is_zero() ? 0.0 : evaluate(d, points_[i]);
    }
    return {evaluate(f, points_[i]), grad};
  }

  bool passes(const NumericGrid& g) const {
    for (std::size_t k = 0; k < g.value.size(); ++k) {
      if (std::abs(g.value[k]) > tol_ * g.scale[k]) return false;
    }
    return true;
  }

  double tolerance() const { return tol_; }

 private:
  std::size_t n_;
  double tol_;
  std::vector<Point<double>> points_;
  std::vector<std::vector<Probe>> probes_;
};

struct Candidate {
  RationalFunction eta;
  std::vector<int> exponents;  // set for monomials
  IntegratingFactor::Source source;
};

}  // namespace

std::vector<RationalFunction> scaled_form(const PfaffianForm& w, const IntegratingFactor& eta,
                                          std::span<const PfaffianForm> others) {
  auto out = times(w.coefficients, eta.eta);
  for (const auto& c : eta.companions) {
    auto it = std::find_if(others.begin(), others.end(), [&](const PfaffianForm& f) { return f.index == c.form; });
    if (it == others.end()) throw InvalidArgument("companion form not available");
    out = plus(std::move(out), times(it->coefficients, c.multiplier));
  }
  return out;
}

IntegratingFactor find_eta(const PfaffianForm& w, std::span<const PfaffianForm> all,
                           const VariableSet& vars, const Domain& domain, const EtaOptions& options) {
  const std::size_t n = vars.dim();
  std::vector<const PfaffianForm*> others;
  for (const auto& f : all) {
    if (f.index != w.index) others.push_back(&f);
  }
  std::vector<std::vector<RationalFunction>> forms{w.coefficients};
  for (const auto* f : others) forms.push_back(f->coefficients);
  Prefilter pre(vars, domain, options, forms);

  const SymbolicMatrix own_defect = exactness_defect(w);
  if (grid_is_zero(own_defect, vars, domain, options.zero)) return {};

  auto numeric_value = [&](const Candidate& c, std::size_t i) {
    return c.exponents.empty() ? pre.function_at(i, c.eta) : pre.monomial_at(i, c.exponents);
  };
  auto numeric_ok = [&](const Candidate& c) {
    for (std::size_t i = 0; i < pre.points(); ++i) {
      try {
        auto [phi, grad] = numeric_value(c, i);
        if (!pre.passes(scaled_defect(pre.probe(i, 0), phi, grad))) return false;
      } catch (const EvalError&) {
        return false;
      }
    }
    return true;
  };
  auto symbolic_ok = [&](const RationalFunction& eta) {
    return grid_is_zero(exactness_defect(times(w.coefficients, eta)), vars, domain, options.zero);
  };

  std::vector<Candidate> structured;
  for (auto& f : coefficient_candidates(w, vars)) {
    structured.push_back({f, {}, IntegratingFactor::Source::ReciprocalCoefficient});
  }
  for (const auto& c : structured) {
    if (numeric_ok(c) && symbolic_ok(c.eta)) return {c.eta, c.source, {}};
  }
  for (const auto& e : exponent_vectors(n, options.monomial_range)) {
    if (std::all_of(e.begin(), e.end(), [](int x) { return x == 0; })) continue;
    Candidate c{RationalFunction(), e, IntegratingFactor::Source::MonomialSearch};
    if (!numeric_ok(c)) continue;
    c.eta = monomial(vars, e);
    if (symbolic_ok(c.eta)) return {c.eta, c.source, {}};
  }

  // Combination η·ω + c·μ·ω_j.
  if (!others.empty()) {
    std::vector<Candidate> etas{{RationalFunction(1), std::vector<int>(n, 0), IntegratingFactor::Source::Combination}};
    etas.insert(etas.end(), structured.begin(), structured.end());
    const auto mus = exponent_vectors(n, options.companion_range);
    for (const auto& e : mus) {
      if (std::any_of(e.begin(), e.end(), [](int x) { return x != 0; })) {
        etas.push_back({RationalFunction(), e, IntegratingFactor::Source::MonomialSearch});
      }
    }
    for (auto& eta : etas) {
      std::vector<NumericGrid> g1;
      bool usable = true;
      for (std::size_t i = 0; i < pre.points() && usable; ++i) {
        try {
          auto [phi, grad] = numeric_value(eta, i);
          g1.push_back(scaled_defect(pre.probe(i, 0), phi, grad));
        } catch (const EvalError&) {
          usable = false;
        }
      }
      if (!usable) continue;
      for (std::size_t j = 0; j < others.size(); ++j) {
        for (const auto& mu : mus) {
          std::vector<NumericGrid> g2;
          double dot = 0;
          double norm = 0;
          for (std::size_t i = 0; i < pre.points(); ++i) {
            auto [phi, grad] = pre.monomial_at(i, mu);
            g2.push_back(scaled_defect(pre.probe(i, j + 1), phi, grad));
            for (std::size_t k = 0; k < g2.back().value.size(); ++k) {
              dot += g1[i].value[k] * g2.back().value[k];
              norm += g2.back().value[k] * g2.back().value[k];
            }
          }
          if (norm == 0) continue;
          const double c = -dot / norm;
          bool ok = true;
          for (std::size_t i = 0; i < pre.points() && ok; ++i) {
            for (std::size_t k = 0; k < g1[i].value.size() && ok; ++k) {
              const double v = g1[i].value[k] + c * g2[i].value[k];
              const double s = g1[i].scale[k] + std::abs(c) * g2[i].scale[k];
              ok = std::abs(v) <= pre.tolerance() * s;
            }
          }
          if (!ok) continue;

          const RationalFunction eta_f = eta.exponents.empty() ? eta.eta : monomial(vars, eta.exponents);
          const RationalFunction mu_f = monomial(vars, mu);
          const SymbolicMatrix d1 = exactness_defect(times(w.coefficients, eta_f));
          const SymbolicMatrix d2 = exactness_defect(times(others[j]->coefficients, mu_f));
          std::optional<RationalFunction> cf;
          for (Eigen::Index a = 0; a < d2.rows() && !cf; ++a) {
            for (Eigen::Index b = a + 1; b < d2.cols() && !cf; ++b) {
              if (!d2(a, b).is_zero()) cf = -d1(a, b) / d2(a, b);
            }
          }
          if (!cf || cf->is_zero() || depends_on_state(*cf, vars)) continue;
          if (!grid_is_zero(d1 + d2 * *cf, vars, domain, options.zero)) continue;
          return {eta_f, IntegratingFactor::Source::Combination, {{others[j]->index, mu_f * *cf}}};
        }
      }
    }
  }

  std::ostringstream os;
  os << "no integrating factor for the form of row " << w.index + 1 << "; defect:";
  for (Eigen::Index a = 0; a < own_defect.rows(); ++a) {
    for (Eigen::Index b = a + 1; b < own_defect.cols(); ++b) {
      if (!own_defect(a, b).is_zero()) {
        os << " [" << vars.symbol(static_cast<std::size_t>(a)) << ',' << vars.symbol(static_cast<std::size_t>(b))
           << "] " << own_defect(a, b) << ';';
      }
    }
  }
  throw IntegratingFactorNotFound(os.str());
}

RationalFunction potential(const std::vector<RationalFunction>& theta, const VariableSet& vars,
                           const Domain& domain, const ZeroTestOptions& options) {
  RationalFunction c;
  for (std::size_t a = 0; a < theta.size(); ++a) {
    RationalFunction r = theta[a] - derivative(c, a);
    if (r.is_zero()) continue;
    for (std::size_t b = 0; b < a; ++b) {
      if (depends_on(r, b)) {
        // Could be a ln identity the canonical form does not see.
        if (is_zero(derivative(r, b), vars, domain, options).zero()) continue;
        throw AntiderivativeOutsideClass("form is not exact: the dx" + std::to_string(a + 1) +
                                         " remainder depends on " + vars.symbol(b));
      }
    }
    c += antiderivative(r, Atom::symbol(a, vars.symbol(a)));
  }
  for (std::size_t a = 0; a < theta.size(); ++a) {
    RationalFunction r = derivative(c, a) - theta[a];
    if (!r.is_zero() && !is_zero(r, vars, domain, options).zero()) {
      throw AntiderivativeOutsideClass("reconstructed potential does not reproduce the dx" +
                                       std::to_string(a + 1) + " coefficient");
    }
  }
  return c;
}

RationalFunction normalize_primitive(const RationalFunction& c, const VariableSet& vars) {
  if (c.is_zero()) return c;
  Polynomial num = c.numerator();
  Polynomial den = c.denominator();
  if (!depends_on_state(RationalFunction(den), vars)) den = Polynomial(1);
  Monomial params;
  for (const auto& [atom, k] : num.monomial_content()) {
    if (atom.is_parameter()) params.emplace_back(atom, k);
  }
  if (!params.empty()) num = *num.divide_monomial(params);

  auto key = [&](const Monomial& m) {
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (const auto& [atom, k] : m) {
      if (atom.is_symbol() && vars.is_state(atom.index())) best = std::min(best, atom.index());
      if (atom.is_log()) {
        for (std::size_t s : free_symbols(atom.argument())) {
          if (vars.is_state(s)) best = std::min(best, s);
        }
      }
    }
    return best;
  };
  const Rational* lead = nullptr;
  std::size_t lead_key = std::numeric_limits<std::size_t>::max();
  for (const auto& [m, coef] : num.terms()) {
    const std::size_t k = key(m);
    if (lead == nullptr || k < lead_key) {
      lead = &coef;
      lead_key = k;
    }
  }
  const Rational s = Rational(1) / *lead;
  return RationalFunction(num * s, den);
}

CasimirFamily integrate(const PfaffianForm& w, const IntegratingFactor& eta, std::span<const PfaffianForm> others,
                        const VariableSet& vars, const Domain& domain, const ZeroTestOptions& options) {
  CasimirFamily family;
  family.source_index = w.index;
  family.eta = eta;
  bool trivial = true;
  for (std::size_t a = 0; a < w.coefficients.size(); ++a) {
    if (a != w.index && !w.coefficients[a].is_zero()) trivial = false;
  }
  if (trivial && eta.companions.empty()) {
    family.primitive = Expr::symbol(w.index, vars.symbol(w.index));
    return family;
  }
  const auto theta = scaled_form(w, eta, others);
  family.primitive = to_expr(normalize_primitive(potential(theta, vars, domain, options), vars));
  return family;
}

std::vector<CasimirFamily> find_casimirs(const StructureMatrix& m, const GammaMatrix& g,
                                         const EtaOptions& options) {
  const auto forms = build_forms(m, g);
  std::vector<CasimirFamily> out;
  for (const auto& w : forms) {
    const IntegratingFactor eta = find_eta(w, forms, m.vars(), m.domain(), options);
    out.push_back(integrate(w, eta, forms, m.vars(), m.domain(), options.zero));
  }
  return out;
}

}  // namespace casimir
