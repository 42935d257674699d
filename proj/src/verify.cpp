#include "casimir/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "casimir/numeric.hpp"

namespace casimir {

bool CasimirCheck::symbolic_zero() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const ZeroVerdict& v) { return v.zero(); });
}

namespace {

std::vector<RationalFunction> gradient(const RationalFunction& f, std::size_t n) {
  std::vector<RationalFunction> g;
  for (std::size_t a = 0; a < n; ++a) g.push_back(derivative(f, a));
  return g;
}

Matrix<double> evaluate_rows(const std::vector<CompiledVector>& rows, const Point<double>& p) {
  Matrix<double> m(static_cast<Eigen::Index>(rows.size()), p.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Point<double> v = rows[r](p);
    m.row(static_cast<Eigen::Index>(r)) = v.transpose();
  }
  return m;
}

}  // namespace

CasimirCheck verify_casimir(const StructureMatrix& m, const Expr& c, const VerifyOptions& options) {
  CasimirCheck check;
  check.casimir = c;
  check.tolerance = options.tolerance;
  const std::size_t n = m.dim();
  const auto grad = gradient(to_rational_function(c), n);
  for (std::size_t i = 0; i < n; ++i) {
    RationalFunction comp;
    for (std::size_t k = 0; k < n; ++k) {
      if (!m(i, k).is_zero() && !grad[k].is_zero()) comp += m(i, k) * grad[k];
    }
    check.verdicts.push_back(is_zero(comp, m.vars(), m.domain(), options.zero));
    check.components.push_back(std::move(comp));
  }

  // Numeric residual from J and ∇C evaluated separately.
  const CompiledVector grad_n(grad);
  Sampler sampler(m.vars(), m.domain(), options.seed);
  int attempts = 0;
  while (check.samples < options.samples && attempts++ < 100 * options.samples) {
    Point<double> p = sampler.next();
    Point<double> r;
    Point<double> scale;
    try {
      const Point<double> g = grad_n(p);
      const Matrix<double> j = m.evaluate(p);
      r = j * g;
      scale = j.cwiseAbs() * g.cwiseAbs();
    } catch (const EvalError&) {
      continue;
    }
    if (!r.allFinite()) continue;
    ++check.samples;
    check.max_residual = std::max(check.max_residual, r.cwiseAbs().maxCoeff());
    const Point<double> scaled = r.cwiseAbs().cwiseQuotient(scale.cwiseMax(1.0));
    check.max_scaled_residual = std::max(check.max_scaled_residual, scaled.maxCoeff());
  }
  return check;
}

IndependenceCheck verify_independence(const StructureMatrix& m, const std::vector<Expr>& cs, int samples,
                                      std::uint64_t seed, double rel_tol) {
  IndependenceCheck out;
  if (cs.empty()) return out;
  std::vector<CompiledVector> rows;
  for (const auto& c : cs) rows.emplace_back(gradient(to_rational_function(c), m.dim()));
  Sampler sampler(m.vars(), m.domain(), seed);
  int attempts = 0;
  while (static_cast<int>(out.sampled.size()) < samples && attempts++ < 100 * samples) {
    Point<double> p = sampler.next();
    Matrix<double> g;
    try {
      g = evaluate_rows(rows, p).leftCols(static_cast<Eigen::Index>(m.dim()));
    } catch (const EvalError&) {
      continue;
    }
    if (!g.allFinite()) continue;
    out.sampled.push_back(numeric_rank(g, rel_tol));
  }
  std::map<int, int> votes;
  for (int r : out.sampled) ++votes[r];
  int best = -1;
  for (const auto& [r, count] : votes) {
    if (best < 0 || count > votes[best]) best = r;
  }
  out.rank = std::max(best, 0);
  return out;
}

namespace {

class Flow {
 public:
  Flow(const StructureMatrix& m, const Expr& h) : n_(m.dim()) {
    const auto grad = gradient(to_rational_function(h), n_);
    std::vector<RationalFunction> field;
    for (std::size_t i = 0; i < n_; ++i) {
      RationalFunction f;
      for (std::size_t k = 0; k < n_; ++k) {
        if (!m(i, k).is_zero() && !grad[k].is_zero()) f += m(i, k) * grad[k];
      }
      field.push_back(std::move(f));
    }
    field_ = CompiledVector(field);
  }

  // Derivative of the state part; parameters ride along unchanged.
  Point<double> operator()(const Point<double>& p) const {
    Point<double> d = Point<double>::Zero(p.size());
    d.head(static_cast<Eigen::Index>(n_)) = field_(p);
    return d;
  }

 private:
  std::size_t n_;
  CompiledVector field_;
};

}  // namespace

FlowReport verify_flow(const StructureMatrix& m, const Expr& h, const std::vector<Expr>& cs,
                       const FlowOptions& options) {
  FlowReport report;
  report.options = options;
  report.max_casimir_drift.assign(cs.size(), 0.0);
  const std::size_t n = m.dim();
  const Flow flow(m, h);
  const CompiledFunction hn(to_rational_function(h));
  std::vector<CompiledFunction> cn;
  for (const auto& c : cs) cn.emplace_back(to_rational_function(c));

  Sampler sampler(m.vars(), m.domain(), options.seed, options.lo, options.hi);
  const int steps = static_cast<int>(std::llround(options.t_end / options.dt));
  int attempts = 0;
  while (static_cast<int>(report.trajectories.size()) < options.trajectories &&
         attempts++ < 100 * options.trajectories) {
    Trajectory tr;
    Point<double> x = sampler.next();
    // Initial states start on the positive side of unconstrained coordinates.
    for (std::size_t i = 0; i < n; ++i) {
      if (m.domain().sign(i) == Sign::Any) x(static_cast<Eigen::Index>(i)) = std::abs(x(static_cast<Eigen::Index>(i)));
    }
    tr.initial = x;
    try {
      tr.hamiltonian_initial = hn(x);
      for (const auto& c : cn) tr.casimir_initial.push_back(c(x));
      (void)flow(x);
    } catch (const EvalError&) {
      continue;
    }
    tr.casimir_drift.assign(cs.size(), 0.0);
    const double dt = options.dt;
    for (int s = 0; s < steps; ++s) {
      Point<double> next;
      try {
        const Point<double> k1 = flow(x);
        const Point<double> k2 = flow(x + 0.5 * dt * k1);
        const Point<double> k3 = flow(x + 0.5 * dt * k2);
        const Point<double> k4 = flow(x + dt * k3);
        next = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      } catch (const EvalError& e) {
        tr.partial = true;
        tr.note = std::string("evaluation failed: ") + e.what();
        break;
      }
      const auto state = x.head(static_cast<Eigen::Index>(n));
      if (!next.allFinite() || (next - x).head(static_cast<Eigen::Index>(n)).cwiseAbs().maxCoeff() >
                                   options.resolution * (1 + state.cwiseAbs().maxCoeff())) {
        tr.partial = true;
        tr.note = "blow-up";
        break;
      }
      if (!m.domain().contains(next, n, options.boundary)) {
        tr.partial = true;
        tr.note = "approached the domain boundary";
        break;
      }
      x = next;
      ++tr.steps;
      try {
        tr.hamiltonian_drift = std::max(tr.hamiltonian_drift, std::abs(hn(x) - tr.hamiltonian_initial));
        for (std::size_t c = 0; c < cn.size(); ++c) {
          tr.casimir_drift[c] = std::max(tr.casimir_drift[c], std::abs(cn[c](x) - tr.casimir_initial[c]));
        }
      } catch (const EvalError& e) {
        tr.partial = true;
        tr.note = std::string("evaluation failed: ") + e.what();
        break;
      }
    }
    tr.t_reached = tr.steps * dt;
    report.max_hamiltonian_drift = std::max(report.max_hamiltonian_drift, tr.hamiltonian_drift);
    const double h_ratio = tr.hamiltonian_drift / (options.tolerance * (1 + std::abs(tr.hamiltonian_initial)));
    report.worst_ratio = std::max(report.worst_ratio, h_ratio);
    if (h_ratio > 1) report.hamiltonian_conserved = false;
    for (std::size_t c = 0; c < cn.size(); ++c) {
      report.max_casimir_drift[c] = std::max(report.max_casimir_drift[c], tr.casimir_drift[c]);
      const double ratio = tr.casimir_drift[c] / (options.tolerance * (1 + std::abs(tr.casimir_initial[c])));
      report.worst_ratio = std::max(report.worst_ratio, ratio);
      if (ratio > 1) report.casimirs_conserved = false;
    }
    report.trajectories.push_back(std::move(tr));
  }
  if (report.trajectories.empty()) throw FlowError("no initial point inside the domain");
  if (report.max_hamiltonian_drift > options.instability) {
    throw FlowError("Hamiltonian drift " + std::to_string(report.max_hamiltonian_drift) +
                    " exceeds the instability threshold; reduce dt");
  }
  return report;
}

Expr random_quadratic_hamiltonian(const VariableSet& vars, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> den(1, 8);
  auto coefficient = [&] {
    const long q = den(rng);
    std::uniform_int_distribution<long> num(-q, q);
    Rational r(num(rng), q);
    r.canonicalize();
    return r;
  };
  std::vector<Expr> terms;
  const std::size_t n = vars.dim();
  auto sym = [&](std::size_t i) { return Expr::symbol(i, vars.symbol(i)); };
  for (std::size_t i = 0; i < n; ++i) {
    terms.push_back(Expr(coefficient()) * sym(i));
    for (std::size_t j = i; j < n; ++j) terms.push_back(Expr(coefficient()) * sym(i) * sym(j));
  }
  return normalize(Expr::sum(std::move(terms)));
}

}  // namespace casimir
