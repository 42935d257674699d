#pragma once

#include <string>

#include "casimir/poisson.hpp"

namespace casimir {

struct VerifyOptions {
  int samples = 30;
  double tolerance = 1e-9;
  std::uint64_t seed = 42;
  ZeroTestOptions zero;
};

/// Components of J·∇C with their verdicts and the largest sampled |value|.
struct CasimirCheck {
  Expr casimir;
  std::vector<RationalFunction> components;
  std::vector<ZeroVerdict> verdicts;
  double max_residual = 0.0;
  /// Residual over max(1, Σ_k |J^{ik} ∂_k C|), the size of the summed terms.
  double max_scaled_residual = 0.0;
  int samples = 0;
  double tolerance = 0.0;

  bool symbolic_zero() const;
  bool passed() const { return symbolic_zero() && max_scaled_residual < tolerance; }
};

CasimirCheck verify_casimir(const StructureMatrix& j, const Expr& c, const VerifyOptions& options = {});

struct IndependenceCheck {
  int rank = 0;  // majority over the samples
  std::vector<int> sampled;
};

IndependenceCheck verify_independence(const StructureMatrix& j, const std::vector<Expr>& cs, int samples = 10,
                                      std::uint64_t seed = 42, double rel_tol = 1e-9);

struct FlowOptions {
  double t_end = 1.0;
  double dt = 1e-3;
  int trajectories = 5;
  std::uint64_t seed = 42;
  /// Box for initial state coordinates and parameter values.
  double lo = 1.0;
  double hi = 2.0;
  double boundary = 1e-6;
  /// Blow-up: one step moves the state by more than this fraction of
  /// 1 + |x|, so the fixed step no longer resolves the motion.
  double resolution = 1e-2;
  /// Drift allowed for a first integral F is tolerance·(1 + |F(x₀)|).
  double tolerance = 1e-6;
  /// Hamiltonian drift beyond this means the step is too coarse.
  double instability = 1e-3;
};

struct Trajectory {
  Point<double> initial;  // state followed by parameters
  int steps = 0;
  double t_reached = 0.0;
  bool partial = false;
  std::string note;
  std::vector<double> casimir_initial;
  std::vector<double> casimir_drift;
  double hamiltonian_initial = 0.0;
  double hamiltonian_drift = 0.0;
};

struct FlowReport {
  FlowOptions options;
  std::vector<Trajectory> trajectories;
  std::vector<double> max_casimir_drift;
  double max_hamiltonian_drift = 0.0;
  /// Largest drift divided by its allowance, over Casimirs and H.
  double worst_ratio = 0.0;
  bool casimirs_conserved = true;
  bool hamiltonian_conserved = true;
};

/// Integrates ẋ = J·∇H with classic RK4 and records the drift of every C and
/// of H. Trajectories nearing the domain boundary or blowing up stop early and
/// are marked partial. Throws FlowError when H drifts past the instability
/// threshold or no trajectory can start.
FlowReport verify_flow(const StructureMatrix& j, const Expr& h, const std::vector<Expr>& cs,
                       const FlowOptions& options = {});

/// Sum of every monomial of degree ≤ 2 in the state variables with random
/// coefficients p/q, |p/q| ≤ 1.
Expr random_quadratic_hamiltonian(const VariableSet& vars, std::uint64_t seed);

}  // namespace casimir
