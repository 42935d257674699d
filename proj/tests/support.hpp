#pragma once

#include <Eigen/Core>
#include <Eigen/SVD>

#include <cmath>
#include <string>
#include <vector>

#include "casimir/fixtures.hpp"
#include "casimir/zero_test.hpp"

// Forward-mode dual numbers: derivatives for the test oracles come from
// evaluating the expression tree, not from the library's symbolic rules.
namespace testing {

struct Dual {
  double v = 0;
  double d = 0;
  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT
  Dual(double value, double deriv) : v(value), d(deriv) {}

  Dual& operator+=(const Dual& o) { return *this = *this + o; }
  Dual& operator-=(const Dual& o) { return *this = *this - o; }
  Dual& operator*=(const Dual& o) { return *this = *this * o; }
  Dual& operator/=(const Dual& o) { return *this = *this / o; }

  friend Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
  friend Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.d - b.d}; }
  friend Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
  friend Dual operator*(const Dual& a, const Dual& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
  friend Dual operator/(const Dual& a, const Dual& b) {
    return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
  }
  friend bool operator==(const Dual& a, const Dual& b) { return a.v == b.v; }
  friend bool operator>(const Dual& a, const Dual& b) { return a.v > b.v; }
  friend Dual log(const Dual& a) { return {std::log(a.v), a.d / a.v}; }
};

}  // namespace testing

namespace Eigen {
template <>
struct NumTraits<testing::Dual> : NumTraits<double> {
  using Real = testing::Dual;
  using NonInteger = testing::Dual;
  using Nested = testing::Dual;
  using Literal = testing::Dual;
  enum { IsComplex = 0, IsInteger = 0, IsSigned = 1, RequireInitialization = 1, ReadCost = 1, AddCost = 3, MulCost = 3 };
};
}  // namespace Eigen

namespace testing {

using casimir::Expr;
using casimir::Point;

inline double value(const Expr& e, const Point<double>& p) { return casimir::eval(e, p); }

/// ∂e/∂x_a for a = 0..n-1 at p.
inline Eigen::VectorXd gradient(const Expr& e, std::size_t n, const Point<double>& p) {
  Eigen::VectorXd g(static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < n; ++a) {
    Point<Dual> q(p.size());
    for (Eigen::Index k = 0; k < p.size(); ++k) q(k) = Dual(p(k), k == static_cast<Eigen::Index>(a) ? 1.0 : 0.0);
    g(static_cast<Eigen::Index>(a)) = casimir::eval<Dual>(e, q).d;
  }
  return g;
}

inline int rank(const Eigen::MatrixXd& m, double rel_tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += s(i) > rel_tol * s(0);
  return r;
}

/// Structure matrix evaluated entry by entry from the file's expression texts.
inline Eigen::MatrixXd structure_at(const casimir::SystemFile& f, const Point<double>& p) {
  const auto n = static_cast<Eigen::Index>(f.vars.size());
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [a, b, text] : f.entries) {
    const double v = value(f.expression(text), p);
    j(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
    j(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = -v;
  }
  return j;
}

/// Points drawn from the file's domain.
inline std::vector<Point<double>> points(const casimir::SystemFile& f, int count, std::uint64_t seed) {
  casimir::Sampler s(f.variables(), f.domain_constraints(), seed);
  std::vector<Point<double>> out;
  for (int i = 0; i < count; ++i) out.push_back(s.next());
  return out;
}

/// Gradients of a and b stacked as a 2×n matrix have rank 1 at every point.
inline bool gradient_parallel(const Expr& a, const Expr& b, const casimir::SystemFile& f, int count = 10,
                              std::uint64_t seed = 7, double tol = 1e-9) {
  const std::size_t n = f.vars.size();
  for (const auto& p : points(f, count, seed)) {
    Eigen::MatrixXd m(2, static_cast<Eigen::Index>(n));
    m.row(0) = gradient(a, n, p).transpose();
    m.row(1) = gradient(b, n, p).transpose();
    if (rank(m, tol) != 1) return false;
  }
  return true;
}

/// max_i |(J ∇C)_i| at p.
inline double casimir_residual(const casimir::SystemFile& f, const Expr& c, const Point<double>& p) {
  return (structure_at(f, p) * gradient(c, f.vars.size(), p)).cwiseAbs().maxCoeff();
}

inline casimir::SystemFile fixture(std::string_view name) { return casimir::load_fixture(name).system; }

}  // namespace testing
