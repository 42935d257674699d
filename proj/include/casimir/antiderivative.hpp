#pragma once

#include "casimir/rational_function.hpp"

namespace casimir {

/// Indefinite integral of f with respect to the symbol atom x, treating every
/// other atom as a constant. Handles the polynomial part, the rational part by
/// Hermite reduction, and logarithmic parts whose squarefree denominator is
/// linear in x, is x times another factor, or has f's remainder as a constant
/// multiple of its derivative. Anything else throws AntiderivativeOutsideClass.
RationalFunction antiderivative(const RationalFunction& f, const Atom& x);

}  // namespace casimir
