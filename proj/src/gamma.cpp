#include "casimir/gamma.hpp"

#include <algorithm>
#include <cmath>

namespace casimir {

const char* to_string(GammaMatrix::Method m) {
  return m == GammaMatrix::Method::Inverse ? "inverse" : "column-solve";
}

const RationalFunction& GammaMatrix::at(std::size_t dependent_row, std::size_t independent_row) const {
  auto c = std::find(dependent.begin(), dependent.end(), dependent_row);
  auto k = std::find(independent.begin(), independent.end(), independent_row);
  if (c == dependent.end() || k == independent.end()) throw InvalidArgument("no such gamma entry");
  return gamma(k - independent.begin(), c - dependent.begin());
}

RationalFunction degeneracy_residual(const StructureMatrix& m, const GammaMatrix& g, std::size_t c,
                                     std::size_t column) {
  RationalFunction r = m(g.dependent[c], column);
  for (std::size_t k = 0; k < g.independent.size(); ++k) {
    const auto& gk = g.gamma(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c));
    const auto& jk = m(g.independent[k], column);
    if (!gk.is_zero() && !jk.is_zero()) r -= gk * jk;
  }
  return r;
}

namespace {

bool over_budget(const SymbolicMatrix& m, std::size_t budget) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j).node_count() > budget) return true;
    }
  }
  return false;
}

}  // namespace

GammaMatrix solve_gamma(const StructureMatrix& m, const PivotDecomposition& d,
                        const GammaOptions& options) {
  GammaMatrix g;
  g.independent.assign(d.independent().begin(), d.independent().end());
  g.dependent.assign(d.dependent().begin(), d.dependent().end());
  const auto rank = static_cast<Eigen::Index>(d.rank);
  const auto corank = static_cast<Eigen::Index>(d.n - d.rank);
  g.gamma = SymbolicMatrix(rank, corank);
  if (corank == 0) return g;

  std::optional<SymbolicMatrix> inv = inverse<RationalFunction>(d.j2m);
  if (!inv) throw CertificationFailure("leading block is singular");
  if (!over_budget(*inv, options.node_budget)) {
    SymbolicMatrix product = d.jrest * *inv;  // corank × rank
    g.gamma = product.transpose();
  } else {
    // Same algebra one right-hand side at a time: J_2mᵀ γ_d = (row d of J_rest)ᵀ.
    g.method = GammaMatrix::Method::ColumnSolve;
    const SymbolicMatrix lhs = d.j2m.transpose();
    for (Eigen::Index c = 0; c < corank; ++c) {
      SymbolicMatrix rhs = d.jrest.row(c).transpose();
      auto x = solve<RationalFunction>(lhs, rhs);
      if (!x) throw CertificationFailure("leading block is singular");
      g.gamma.col(c) = *x;
    }
  }

  ZeroTestOptions zopt;
  zopt.seed = options.seed;
  for (std::size_t c = 0; c < g.dependent.size(); ++c) {
    for (std::size_t col = 0; col < d.n; ++col) {
      RationalFunction r = degeneracy_residual(m, g, c, col);
      if (!r.is_zero() && !is_zero(r, m.vars(), m.domain(), zopt).zero()) {
        throw CertificationFailure("degeneracy relation fails for row " + std::to_string(g.dependent[c] + 1) +
                                   " in column " + std::to_string(col + 1) + "; rank misjudged");
      }
    }
  }

  // Numeric residuals from separately evaluated J and Γ.
  Sampler sampler(m.vars(), m.domain(), options.seed ^ 0x6a09e667f3bcc908ULL);
  int attempts = 0;
  while (g.numeric_samples < options.samples && attempts++ < 100 * options.samples) {
    Point<double> p = sampler.next();
    Matrix<double> jv;
    Matrix<double> gv(rank, corank);
    try {
      jv = m.evaluate(p);
      for (Eigen::Index i = 0; i < rank; ++i) {
        for (Eigen::Index c = 0; c < corank; ++c) gv(i, c) = evaluate(g.gamma(i, c), p);
      }
    } catch (const EvalError&) {
      continue;
    }
    ++g.numeric_samples;
    for (Eigen::Index c = 0; c < corank; ++c) {
      for (Eigen::Index col = 0; col < jv.cols(); ++col) {
        double r = jv(static_cast<Eigen::Index>(g.dependent[static_cast<std::size_t>(c)]), col);
        for (Eigen::Index k = 0; k < rank; ++k) {
          r -= gv(k, c) * jv(static_cast<Eigen::Index>(g.independent[static_cast<std::size_t>(k)]), col);
        }
        g.max_numeric_residual = std::max(g.max_numeric_residual, std::abs(r));
      }
    }
  }
  return g;
}

}  // namespace casimir
