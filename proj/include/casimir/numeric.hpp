#pragma once

#include <vector>

#include "casimir/rational_function.hpp"

namespace casimir {

/// Double-precision evaluator for a fixed rational function. Coefficients
/// are converted once; ln atoms are evaluated through their arguments.
class CompiledFunction {
 public:
  CompiledFunction() = default;
  explicit CompiledFunction(const RationalFunction& f);

  /// Throws EvalError on a vanishing denominator or a non-positive ln argument.
  double operator()(const Point<double>& p) const;

  bool is_zero() const { return num_.empty(); }

 private:
  struct Term {
    double coefficient;
    std::vector<std::pair<std::size_t, int>> factors;  // (atom slot, exponent)
  };
  static std::vector<Term> lower(const Polynomial& p, std::vector<Atom>& atoms);
  static double sum(const std::vector<Term>& terms, const std::vector<double>& values);

  std::vector<Atom> atoms_;
  std::vector<Term> num_;
  std::vector<Term> den_;
};

/// Componentwise compiled vector of functions.
class CompiledVector {
 public:
  CompiledVector() = default;
  explicit CompiledVector(const std::vector<RationalFunction>& fs);

  Point<double> operator()(const Point<double>& p) const;
  std::size_t size() const { return parts_.size(); }

 private:
  std::vector<CompiledFunction> parts_;
};

}  // namespace casimir
