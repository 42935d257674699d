#pragma once

#include "casimir/poisson.hpp"

namespace casimir {

struct GammaOptions {
  /// Largest node count tolerated in an inverse entry before switching to
  /// column-by-column solves.
  std::size_t node_budget = 100000;
  int samples = 20;
  std::uint64_t seed = 42;
};

/// γ^d_k for every dependent row d and independent row k: row d of J equals
/// Σ_k γ^d_k · (row k of J) over all n columns.
struct GammaMatrix {
  enum class Method { Inverse, ColumnSolve };

  std::vector<std::size_t> independent;
  std::vector<std::size_t> dependent;
  /// independent.size() × dependent.size(); column c holds the γ of dependent[c].
  SymbolicMatrix gamma;
  Method method = Method::Inverse;
  /// Largest |J^{dj} − Σ_k γ^d_k J^{kj}| over all (d, j) and sampled points.
  double max_numeric_residual = 0.0;
  int numeric_samples = 0;

  /// γ by original (0-based) row indices.
  const RationalFunction& at(std::size_t dependent_row, std::size_t independent_row) const;
};

const char* to_string(GammaMatrix::Method m);

/// Γ = (J_rest · J_2m⁻¹)ᵀ, certified over every column of J. Throws
/// CertificationFailure when a residual does not vanish.
GammaMatrix solve_gamma(const StructureMatrix& j, const PivotDecomposition& d,
                        const GammaOptions& options = {});

/// Residual J^{dj} − Σ_k γ^d_k J^{kj} for dependent row index c of g.
RationalFunction degeneracy_residual(const StructureMatrix& j, const GammaMatrix& g, std::size_t c,
                                     std::size_t column);

}  // namespace casimir
