#pragma once

#include <Eigen/SVD>

#include <optional>
#include <utility>

#include "casimir/rational_function.hpp"

namespace casimir {

inline bool exact_zero(double x) { return x == 0.0; }
inline bool exact_zero(const RationalFunction& x) { return x.is_zero(); }

/// Fraction-free Gauss-Jordan elimination on [A | B] (Bareiss). On return the
/// left block is d·I and the right block is d·A⁻¹B, where d is the returned
/// determinant up to the sign of the row swaps. Returns nullopt when A is singular.
template <typename Scalar>
std::optional<Scalar> bareiss_eliminate(Matrix<Scalar>& a, Matrix<Scalar>& b) {
  const Eigen::Index n = a.rows();
  Scalar prev(1);
  bool negate = false;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot = k;
    while (pivot < n && exact_zero(a(pivot, k))) ++pivot;
    if (pivot == n) return std::nullopt;
    if (pivot != k) {
      a.row(k).swap(a.row(pivot));
      b.row(k).swap(b.row(pivot));
      negate = !negate;
    }
    const Scalar pkk = a(k, k);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == k) continue;
      const Scalar aik = a(i, k);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == k) continue;
        a(i, j) = (pkk * a(i, j) - aik * a(k, j)) / prev;
      }
      for (Eigen::Index j = 0; j < b.cols(); ++j) {
        b(i, j) = (pkk * b(i, j) - aik * b(k, j)) / prev;
      }
      a(i, k) = Scalar(0);
    }
    prev = pkk;
  }
  return negate ? Scalar(-prev) : prev;
}

template <typename Scalar>
Scalar determinant(Matrix<Scalar> a) {
  Matrix<Scalar> none(a.rows(), 0);
  auto d = bareiss_eliminate(a, none);
  return d ? *d : Scalar(0);
}

/// Solves A X = B; nullopt if A is singular.
template <typename Scalar>
std::optional<Matrix<Scalar>> solve(Matrix<Scalar> a, Matrix<Scalar> b) {
  const Eigen::Index n = a.rows();
  auto d = bareiss_eliminate(a, b);
  if (!d) return std::nullopt;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar diag = a(i, i);
    for (Eigen::Index j = 0; j < b.cols(); ++j) b(i, j) = b(i, j) / diag;
  }
  return b;
}

template <typename Scalar>
std::optional<Matrix<Scalar>> inverse(const Matrix<Scalar>& a) {
  Matrix<Scalar> id(a.rows(), a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) id(i, j) = Scalar(i == j ? 1 : 0);
  }
  return solve<Scalar>(a, std::move(id));
}

/// Singular values below rel_tol·σ_max count as zero.
inline int numeric_rank(const Matrix<double>& m, double rel_tol = 1e-9) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix<double>> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel_tol * s(0)) ++r;
  }
  return r;
}

}  // namespace casimir
