#pragma once

#include <optional>
#include <string>

#include "casimir/expr.hpp"

namespace casimir {

/// Quadrature counts: N_a = n − 2m for the algebraic route, N_c = 2m(n − 2)
/// for characteristics.
struct CostReport {
  std::size_t n = 0;
  std::size_t two_m = 0;
  std::size_t na = 0;
  std::size_t nc = 0;
  /// N_a / N_c; absent when N_c = 0.
  std::optional<Rational> ratio;
  /// Why the ratio is absent, if it is.
  std::string degenerate;
};

/// Throws InvalidArgument unless 0 ≤ two_m ≤ n and two_m is even.
CostReport cost(std::size_t n, std::size_t two_m);

}  // namespace casimir
