#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "casimir/linalg.hpp"
#include "casimir/zero_test.hpp"

namespace casimir {

/// n×n structure matrix over a variable set. Entries are kept in canonical
/// rational-function form; nothing is assumed about skew-symmetry until
/// check_skew says so.
class StructureMatrix {
 public:
  StructureMatrix(VariableSet vars, SymbolicMatrix entries, Domain domain = {});

  /// Builds J from its strict upper triangle; the rest follows by skew-symmetry.
  static StructureMatrix from_upper(VariableSet vars,
                                    const std::vector<std::tuple<std::size_t, std::size_t, Expr>>& upper,
                                    Domain domain = {});

  const VariableSet& vars() const { return vars_; }
  const Domain& domain() const { return domain_; }
  const SymbolicMatrix& entries() const { return entries_; }
  const RationalFunction& operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  std::size_t dim() const { return vars_.dim(); }

  Matrix<double> evaluate(const Point<double>& p) const;

 private:
  VariableSet vars_;
  SymbolicMatrix entries_;
  Domain domain_;
};

/// One offending index tuple (0-based) with its residual and verdict.
struct Finding {
  std::vector<std::size_t> indices;
  RationalFunction residual;
  ZeroVerdict verdict;
};

struct ValidationReport {
  std::size_t checked = 0;
  std::vector<Finding> violations;
  /// Residuals not zero in canonical form but zero at every sampled point.
  std::vector<Finding> probable;

  bool valid() const { return violations.empty(); }
};

ValidationReport check_skew(const StructureMatrix& j, const ZeroTestOptions& options = {});
ValidationReport check_jacobi(const StructureMatrix& j, const ZeroTestOptions& options = {});

/// Jacobi residual for the triple (i, j, k), 0-based.
RationalFunction jacobi_residual(const StructureMatrix& m, std::size_t i, std::size_t j, std::size_t k);

struct RankOptions {
  int samples = 7;
  double rel_tol = 1e-9;
  std::uint64_t seed = 42;
};

struct PivotDecomposition {
  std::size_t n = 0;
  std::size_t rank = 0;
  /// Independent rows (ascending) followed by dependent rows (ascending).
  std::vector<std::size_t> row_perm;
  std::vector<std::size_t> col_perm;
  SymbolicMatrix j2m;
  SymbolicMatrix jrest;
  RationalFunction det;
  ZeroVerdict det_verdict;
  std::vector<int> sampled_ranks;

  std::span<const std::size_t> independent() const { return {row_perm.data(), rank}; }
  std::span<const std::size_t> dependent() const {
    return {row_perm.data() + rank, n - rank};
  }
};

/// Numeric rank at `samples` generic points; all samples must agree.
int generic_rank(const StructureMatrix& j, const RankOptions& options = {},
                 std::vector<int>* sampled = nullptr);

/// Chooses 2m independent rows and certifies the principal 2m×2m block.
///
/// Rows are visited from the sparsest to the densest (ties by index) and kept
/// while they raise the numeric rank at one generic point. For a skew matrix
/// the principal block on a row basis is nonsingular, so the column
/// permutation equals the row permutation.
PivotDecomposition decompose(const StructureMatrix& j, const RankOptions& options = {});

}  // namespace casimir
