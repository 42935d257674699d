#include <doctest.h>

#include "casimir/gamma.hpp"
#include "support.hpp"

using namespace casimir;
using testing::fixture;

namespace {

struct Solved {
  SystemFile file;
  StructureMatrix m;
  PivotDecomposition d;
  GammaMatrix g;
};

Solved solved(std::string_view name, GammaOptions options = {}) {
  SystemFile f = fixture(name);
  StructureMatrix m = f.structure();
  PivotDecomposition d = decompose(m);
  GammaMatrix g = solve_gamma(m, d, options);
  return {std::move(f), std::move(m), std::move(d), std::move(g)};
}

RationalFunction R(const SystemFile& f, std::string_view text) { return to_rational_function(f.expression(text)); }

}  // namespace

TEST_CASE("first Lotka-Volterra structure") {
  const auto s = solved("lv3-j1");
  CHECK(s.g.at(2, 0) == R(s.file, "x3/(c*x1)"));
  CHECK(s.g.at(2, 1) == R(s.file, "b*x3/x2"));
}

TEST_CASE("second Lotka-Volterra structure") {
  const auto s = solved("lv3-j2");
  CHECK(s.g.at(2, 0) == R(s.file, "-x3/(c*(a*x3 + mu))"));
  CHECK(s.g.at(2, 1) == R(s.file, "x3*(x2 + nu)/(x2*(a*x3 + mu))"));
}

TEST_CASE("light top") {
  const auto s = solved("light-top");
  CHECK(s.g.at(2, 0) == R(s.file, "-F1/F3"));
  CHECK(s.g.at(2, 1) == R(s.file, "-F2/F3"));
  CHECK(s.g.at(2, 3) == R(s.file, "(F1*M3 - M1*F3)/F3^2"));
  CHECK(s.g.at(2, 4) == R(s.file, "(F2*M3 - M2*F3)/F3^2"));
  CHECK(s.g.at(5, 0) == RationalFunction(0));
  CHECK(s.g.at(5, 1) == RationalFunction(0));
  CHECK(s.g.at(5, 3) == R(s.file, "-F1/F3"));
  CHECK(s.g.at(5, 4) == R(s.file, "-F2/F3"));
}

TEST_CASE("degeneracy relations hold symbolically and numerically for every fixture") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    const auto s = solved(name);
    const std::size_t n = s.m.dim();
    for (std::size_t c = 0; c < s.g.dependent.size(); ++c) {
      for (std::size_t j = 0; j < n; ++j) CHECK(degeneracy_residual(s.m, s.g, c, j).is_zero());
    }
    // Oracle: evaluate J and γ independently and form the residual.
    for (const auto& p : testing::points(s.file, 20, 31)) {
      const Eigen::MatrixXd jm = testing::structure_at(s.file, p);
      for (std::size_t c = 0; c < s.g.dependent.size(); ++c) {
        Eigen::RowVectorXd row = jm.row(static_cast<Eigen::Index>(s.g.dependent[c]));
        for (std::size_t k = 0; k < s.g.independent.size(); ++k) {
          const double gamma = testing::value(to_expr(s.g.at(s.g.dependent[c], s.g.independent[k])), p);
          row -= gamma * jm.row(static_cast<Eigen::Index>(s.g.independent[k]));
        }
        CHECK(row.cwiseAbs().maxCoeff() < 1e-9);
      }
    }
    CHECK(s.g.max_numeric_residual < 1e-9);
    if (!s.g.dependent.empty()) CHECK(s.g.numeric_samples == 20);
  }
}

TEST_CASE("fixture expectations hold literally") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    const auto s = solved(name);
    if (!s.file.expect) continue;
    for (const auto& e : s.file.expect->gamma) {
      CAPTURE(e.text);
      CHECK(s.g.at(e.dependent, e.independent) == R(s.file, e.text));
    }
  }
}

TEST_CASE("gamma is unique: perturbing one entry breaks a relation") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    const auto s = solved(name);
    const std::size_t n = s.m.dim();
    for (Eigen::Index k = 0; k < s.g.gamma.rows(); ++k) {
      for (Eigen::Index c = 0; c < s.g.gamma.cols(); ++c) {
        GammaMatrix bent = s.g;
        bent.gamma(k, c) += RationalFunction(1);
        bool broken = false;
        for (std::size_t j = 0; j < n; ++j) broken = broken || !degeneracy_residual(s.m, bent, static_cast<std::size_t>(c), j).is_zero();
        CHECK(broken);
      }
    }
  }
}

TEST_CASE("pivot block times its inverse is the identity") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    const auto d = decompose(fixture(name).structure());
    const auto inv = inverse(d.j2m);
    REQUIRE(inv);
    const SymbolicMatrix id = d.j2m * *inv;
    for (Eigen::Index i = 0; i < id.rows(); ++i) {
      for (Eigen::Index j = 0; j < id.cols(); ++j) CHECK(id(i, j) == RationalFunction(i == j ? 1 : 0));
    }
  }
}

TEST_CASE("column solves agree with the inverse") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    const auto a = solved(name);
    const auto b = solved(name, GammaOptions{0, 20, 42});
    CHECK(a.g.method == GammaMatrix::Method::Inverse);
    if (!b.g.dependent.empty()) CHECK(b.g.method == GammaMatrix::Method::ColumnSolve);
    CHECK(a.g.gamma == b.g.gamma);
  }
}

TEST_CASE("full rank gives an empty gamma") {
  const auto s = solved("symplectic2");
  CHECK(s.g.dependent.empty());
  CHECK(s.g.gamma.cols() == 0);
}
