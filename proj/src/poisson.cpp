#include "casimir/poisson.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace casimir {

StructureMatrix::StructureMatrix(VariableSet vars, SymbolicMatrix entries, Domain domain)
    : vars_(std::move(vars)), entries_(std::move(entries)), domain_(std::move(domain)) {
  const auto n = static_cast<Eigen::Index>(vars_.dim());
  if (entries_.rows() != n || entries_.cols() != n) {
    throw InvalidArgument("structure matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (domain_.size() == 0) domain_ = Domain(vars_);
  if (domain_.size() != vars_.size()) throw InvalidArgument("domain does not match the variable set");
}

StructureMatrix StructureMatrix::from_upper(
    VariableSet vars, const std::vector<std::tuple<std::size_t, std::size_t, Expr>>& upper,
    Domain domain) {
  const auto n = static_cast<Eigen::Index>(vars.dim());
  SymbolicMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = RationalFunction();
  }
  for (const auto& [i, j, e] : upper) {
    if (i >= j || j >= vars.dim()) {
      throw InvalidArgument("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                            ") is not in the strict upper triangle");
    }
    const auto a = static_cast<Eigen::Index>(i);
    const auto b = static_cast<Eigen::Index>(j);
    m(a, b) = to_rational_function(e);
    m(b, a) = -m(a, b);
  }
  return StructureMatrix(std::move(vars), std::move(m), std::move(domain));
}

Matrix<double> StructureMatrix::evaluate(const Point<double>& p) const {
  const auto n = entries_.rows();
  Matrix<double> out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out(i, j) = entries_(i, j).is_zero() ? 0.0 : casimir::evaluate(entries_(i, j), p);
    }
  }
  return out;
}

namespace {

void record(ValidationReport& report, std::vector<std::size_t> indices, RationalFunction residual,
            const StructureMatrix& m, const ZeroTestOptions& options) {
  ++report.checked;
  if (residual.is_zero()) return;
  ZeroVerdict v = is_zero(residual, m.vars(), m.domain(), options);
  Finding f{std::move(indices), std::move(residual), v};
  if (v.kind == ZeroKind::NonZero) {
    report.violations.push_back(std::move(f));
  } else {
    report.probable.push_back(std::move(f));
  }
}

}  // namespace

ValidationReport check_skew(const StructureMatrix& m, const ZeroTestOptions& options) {
  ValidationReport report;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = i; j < m.dim(); ++j) record(report, {i, j}, m(i, j) + m(j, i), m, options);
  }
  return report;
}

RationalFunction jacobi_residual(const StructureMatrix& m, std::size_t i, std::size_t j, std::size_t k) {
  RationalFunction r;
  for (std::size_t l = 0; l < m.dim(); ++l) {
    auto term = [&](std::size_t a, std::size_t b, std::size_t c) {
      if (m(l, a).is_zero() || m(b, c).is_zero()) return;
      RationalFunction d = derivative(m(b, c), l);
      if (!d.is_zero()) r += m(l, a) * d;
    };
    term(i, j, k);
    term(j, k, i);
    term(k, i, j);
  }
  return r;
}

ValidationReport check_jacobi(const StructureMatrix& m, const ZeroTestOptions& options) {
  ValidationReport report;
  const std::size_t n = m.dim();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        record(report, {i, j, k}, jacobi_residual(m, i, j, k), m, options);
      }
    }
  }
  return report;
}

namespace {

std::vector<Point<double>> sample_points(const StructureMatrix& m, const RankOptions& options) {
  Sampler sampler(m.vars(), m.domain(), options.seed);
  std::vector<Point<double>> points;
  int attempts = 0;
  while (static_cast<int>(points.size()) < options.samples && attempts++ < 100 * options.samples) {
    Point<double> p = sampler.next();
    try {
      Matrix<double> v = m.evaluate(p);
      if (!v.allFinite()) continue;
    } catch (const EvalError&) {
      continue;
    }
    points.push_back(std::move(p));
  }
  if (points.empty()) throw EvalError("no sample point inside the domain of the structure matrix");
  return points;
}

Matrix<double> select_rows(const Matrix<double>& m, const std::vector<std::size_t>& rows) {
  Matrix<double> out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) = m.row(static_cast<Eigen::Index>(rows[r]));
  }
  return out;
}

SymbolicMatrix block(const StructureMatrix& m, std::span<const std::size_t> rows,
                     std::span<const std::size_t> cols) {
  SymbolicMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(rows[r], cols[c]);
    }
  }
  return out;
}

}  // namespace

int generic_rank(const StructureMatrix& m, const RankOptions& options, std::vector<int>* sampled) {
  std::vector<int> ranks;
  for (const auto& p : sample_points(m, options)) ranks.push_back(numeric_rank(m.evaluate(p), options.rel_tol));
  if (sampled) *sampled = ranks;
  if (std::adjacent_find(ranks.begin(), ranks.end(), std::not_equal_to<>()) != ranks.end()) {
    std::ostringstream os;
    os << "sampled ranks disagree:";
    for (int r : ranks) os << ' ' << r;
    throw RankInstability(os.str());
  }
  return ranks.front();
}

PivotDecomposition decompose(const StructureMatrix& m, const RankOptions& options) {
  PivotDecomposition d;
  d.n = m.dim();
  d.rank = static_cast<std::size_t>(generic_rank(m, options, &d.sampled_ranks));

  // Greedy row basis at the first sample point, sparsest rows first.
  const Matrix<double> at = m.evaluate(sample_points(m, options).front());
  std::vector<std::size_t> order(d.n);
  std::iota(order.begin(), order.end(), 0);
  auto weight = [&](std::size_t r) {
    std::size_t w = 0;
    for (std::size_t c = 0; c < d.n; ++c) w += m(r, c).is_zero() ? 0 : 1;
    return w;
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return weight(a) < weight(b); });
  std::vector<std::size_t> independent;
  std::vector<std::size_t> dependent;
  for (std::size_t r : order) {
    auto trial = independent;
    trial.push_back(r);
    if (independent.size() < d.rank &&
        numeric_rank(select_rows(at, trial), options.rel_tol) == static_cast<int>(trial.size())) {
      independent = std::move(trial);
    } else {
      dependent.push_back(r);
    }
  }
  if (independent.size() != d.rank) {
    throw RankInstability("greedy pivoting found " + std::to_string(independent.size()) +
                          " independent rows, expected " + std::to_string(d.rank));
  }
  std::sort(independent.begin(), independent.end());
  std::sort(dependent.begin(), dependent.end());
  d.row_perm = independent;
  d.row_perm.insert(d.row_perm.end(), dependent.begin(), dependent.end());
  d.col_perm = d.row_perm;

  d.j2m = block(m, d.independent(), d.independent());
  d.jrest = block(m, d.dependent(), d.independent());
  d.det = determinant(d.j2m);
  ZeroTestOptions zopt;
  zopt.seed = options.seed;
  d.det_verdict = is_zero(d.det, m.vars(), m.domain(), zopt);
  if (d.rank > 0 && d.det_verdict.zero()) {
    throw CertificationFailure("leading block of the pivot decomposition is singular");
  }
  return d;
}

}  // namespace casimir
