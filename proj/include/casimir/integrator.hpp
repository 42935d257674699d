#pragma once

#include <span>

#include "casimir/gamma.hpp"

namespace casimir {

/// ω_i = dxⁱ − Σ_k γ^i_k dxᵏ; coefficients[a] multiplies dxᵃ.
struct PfaffianForm {
  std::size_t index = 0;
  std::vector<RationalFunction> coefficients;
};

std::vector<PfaffianForm> build_forms(const StructureMatrix& j, const GammaMatrix& g);

/// Antisymmetric grid ∂_a w_b − ∂_b w_a over the state variables.
SymbolicMatrix exactness_defect(const std::vector<RationalFunction>& w);
SymbolicMatrix exactness_defect(const PfaffianForm& w);

/// Another form added with a multiplier to close a non-integrable one.
struct Companion {
  std::size_t form = 0;  // index of the companion form's dependent row
  RationalFunction multiplier;
};

struct IntegratingFactor {
  enum class Source { NotNeeded, ReciprocalCoefficient, MonomialSearch, Combination };
  RationalFunction eta{1};
  Source source = Source::NotNeeded;
  std::vector<Companion> companions;
};

const char* to_string(IntegratingFactor::Source s);

struct EtaOptions {
  int monomial_range = 2;   // exponents in [-range, range] for the plain search
  int companion_range = 1;  // exponents for combination multipliers
  int prefilter_points = 3;
  double prefilter_tol = 1e-8;
  std::uint64_t seed = 42;
  ZeroTestOptions zero;
};

/// Searches η with η·ω exact: η = 1, then factors built from the coefficients'
/// numerators and denominators, then monomials in the state variables. When
/// ω alone admits no factor in that family, tries η·ω + c·μ·ω_j for another
/// form ω_j, a monomial μ and a state-free constant c.
IntegratingFactor find_eta(const PfaffianForm& w, std::span<const PfaffianForm> others,
                           const VariableSet& vars, const Domain& domain, const EtaOptions& options = {});

/// η·ω plus every companion term.
std::vector<RationalFunction> scaled_form(const PfaffianForm& w, const IntegratingFactor& eta,
                                          std::span<const PfaffianForm> others);

struct CasimirFamily {
  /// Any smooth one-variable function of the primitive is again a Casimir.
  Expr primitive;
  std::size_t source_index = 0;
  IntegratingFactor eta;
};

/// Staircase potential of an exact form: integrate along x¹, subtract what is
/// already accounted for, integrate along x², and so on.
RationalFunction potential(const std::vector<RationalFunction>& exact_form, const VariableSet& vars,
                           const Domain& domain, const ZeroTestOptions& options = {});

/// Clears state-free denominators and parameter content, then scales so the
/// term built on the lowest-indexed state variable has coefficient +1.
RationalFunction normalize_primitive(const RationalFunction& c, const VariableSet& vars);

CasimirFamily integrate(const PfaffianForm& w, const IntegratingFactor& eta,
                        std::span<const PfaffianForm> others, const VariableSet& vars,
                        const Domain& domain, const ZeroTestOptions& options = {});

/// Forms, factors and primitives for every dependent row.
std::vector<CasimirFamily> find_casimirs(const StructureMatrix& j, const GammaMatrix& g,
                                         const EtaOptions& options = {});

}  // namespace casimir
