#include "casimir/cost.hpp"

namespace casimir {

CostReport cost(std::size_t n, std::size_t two_m) {
  if (n == 0) throw InvalidArgument("dimension must be positive");
  if (two_m % 2 != 0) throw InvalidArgument("rank " + std::to_string(two_m) + " is odd");
  if (two_m > n) throw InvalidArgument("rank " + std::to_string(two_m) + " exceeds dimension " + std::to_string(n));
  CostReport r;
  r.n = n;
  r.two_m = two_m;
  r.na = n - two_m;
  r.nc = n >= 2 ? two_m * (n - 2) : 0;
  if (two_m == 0) {
    r.degenerate = "null structure matrix";
  } else if (r.nc == 0) {
    r.degenerate = "no characteristics quadratures (n = 2)";
  } else {
    r.ratio = Rational(static_cast<long>(r.na), static_cast<long>(r.nc));
    r.ratio->canonicalize();
  }
  return r;
}

}  // namespace casimir
