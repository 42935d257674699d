#include <doctest.h>

#include <random>

#include "casimir/poisson.hpp"
#include "support.hpp"

using namespace casimir;
using testing::fixture;

namespace {

// Jacobi residual J^{il}∂_l J^{jk} + cyclic, from dual-number derivatives of
// the entry expressions.
double jacobi_numeric(const SystemFile& f, std::size_t i, std::size_t j, std::size_t k, const Point<double>& p) {
  const std::size_t n = f.vars.size();
  std::vector<std::vector<Expr>> e(n, std::vector<Expr>(n, Expr(0L)));
  for (const auto& [a, b, text] : f.entries) {
    e[a][b] = f.expression(text);
    e[b][a] = -f.expression(text);
  }
  const Eigen::MatrixXd jm = testing::structure_at(f, p);
  auto term = [&](std::size_t a, std::size_t b, std::size_t c) {
    const Eigen::VectorXd g = testing::gradient(e[b][c], n, p);
    return jm.row(static_cast<Eigen::Index>(a)).dot(g);
  };
  return term(i, j, k) + term(j, k, i) + term(k, i, j);
}

SystemFile mutant() {
  SystemFile f = fixture("lv3-j1");
  for (auto& [i, j, text] : f.entries) {
    if (i == 0 && j == 1) text = "c*x1";
  }
  return f;
}

StructureMatrix random_constant_skew(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("y" + std::to_string(i + 1));
  const VariableSet vars(names);
  // Rank varies because some entries are forced to zero.
  std::uniform_int_distribution<long> d(-3, 3);
  std::bernoulli_distribution sparse(0.4);
  std::vector<std::tuple<std::size_t, std::size_t, Expr>> upper;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) upper.emplace_back(i, j, Expr(sparse(rng) ? 0L : d(rng)));
  }
  return StructureMatrix::from_upper(vars, upper);
}

}  // namespace

TEST_CASE("first Lotka-Volterra structure is a valid Poisson matrix") {
  const auto m = fixture("lv3-j1").structure();
  CHECK(check_skew(m).valid());
  const auto jacobi = check_jacobi(m);
  CHECK(jacobi.valid());
  CHECK(jacobi.checked == 1);
}

TEST_CASE("zero matrix is valid") {
  const VariableSet vars({"x1", "x2", "x3"});
  const StructureMatrix m(vars, SymbolicMatrix::Constant(3, 3, RationalFunction(0)));
  CHECK(check_skew(m).valid());
  CHECK(check_jacobi(m).valid());
}

TEST_CASE("symmetric corruption is caught at (1,2)") {
  const VariableSet vars({"x1", "x2", "x3"});
  SymbolicMatrix e = SymbolicMatrix::Constant(3, 3, RationalFunction(0));
  e(0, 1) = to_rational_function(parse("x1", vars));
  e(1, 0) = to_rational_function(parse("x1", vars));
  const auto report = check_skew(StructureMatrix(vars, e));
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].indices == std::vector<std::size_t>{0, 1});
}

TEST_CASE("nonzero diagonal is a skew violation") {
  const VariableSet vars({"x1", "x2"});
  SymbolicMatrix e = SymbolicMatrix::Constant(2, 2, RationalFunction(0));
  e(1, 1) = RationalFunction(1);
  CHECK_FALSE(check_skew(StructureMatrix(vars, e)).valid());
}

TEST_CASE("light top passes every Jacobi triple") {
  const auto report = check_jacobi(fixture("light-top").structure());
  CHECK(report.checked == 20);
  CHECK(report.valid());
  CHECK(report.probable.empty());
}

TEST_CASE("constant skew matrices satisfy Jacobi") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = random_constant_skew(rng, 2 + trial % 5);
    CHECK(check_skew(m).valid());
    CHECK(check_jacobi(m).valid());
  }
}

TEST_CASE("corrupted first structure fails Jacobi, confirmed numerically") {
  const SystemFile f = mutant();
  const auto report = check_jacobi(f.structure());
  REQUIRE_FALSE(report.valid());
  const auto& t = report.violations.front().indices;
  REQUIRE(t.size() == 3);
  for (const auto& p : testing::points(f, 5, 99)) {
    CHECK(std::abs(jacobi_numeric(f, t[0], t[1], t[2], p)) > 1e-6);
  }
}

TEST_CASE("oracle agrees the uncorrupted structure has zero Jacobi residual") {
  const SystemFile f = fixture("lv3-j1");
  for (const auto& p : testing::points(f, 5, 99)) CHECK(std::abs(jacobi_numeric(f, 0, 1, 2, p)) < 1e-9);
}

TEST_CASE("rank and dependent rows of the worked examples") {
  SUBCASE("first Lotka-Volterra structure") {
    const auto d = decompose(fixture("lv3-j1").structure());
    CHECK(d.rank == 2);
    CHECK(std::vector<std::size_t>(d.independent().begin(), d.independent().end()) == std::vector<std::size_t>{0, 1});
    CHECK(std::vector<std::size_t>(d.dependent().begin(), d.dependent().end()) == std::vector<std::size_t>{2});
  }
  SUBCASE("light top") {
    const auto d = decompose(fixture("light-top").structure());
    CHECK(d.rank == 4);
    CHECK(std::vector<std::size_t>(d.dependent().begin(), d.dependent().end()) == std::vector<std::size_t>{2, 5});
  }
  SUBCASE("symplectic block") {
    const auto d = decompose(fixture("symplectic2").structure());
    CHECK(d.rank == 2);
    CHECK(d.dependent().empty());
  }
}

TEST_CASE("rank is even for every fixture and random constant skew matrices") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    CHECK(generic_rank(fixture(name).structure()) % 2 == 0);
  }
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const auto m = random_constant_skew(rng, 1 + trial % 7);
    CHECK(generic_rank(m) % 2 == 0);
  }
}

TEST_CASE("sampled ranks are recorded") {
  std::vector<int> sampled;
  const int r = generic_rank(fixture("so3").structure(), RankOptions{}, &sampled);
  CHECK(r == 2);
  CHECK(sampled == std::vector<int>(7, 2));
}

TEST_CASE("each dependent row lies in the span of the independent rows") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    const SystemFile f = fixture(name);
    const auto d = decompose(f.structure());
    for (std::size_t r : d.dependent()) {
      for (const auto& p : testing::points(f, 10, 123)) {
        const Eigen::MatrixXd j = testing::structure_at(f, p);
        Eigen::MatrixXd rows(static_cast<Eigen::Index>(d.rank + 1), j.cols());
        for (std::size_t k = 0; k < d.rank; ++k) rows.row(static_cast<Eigen::Index>(k)) = j.row(static_cast<Eigen::Index>(d.independent()[k]));
        rows.row(static_cast<Eigen::Index>(d.rank)) = j.row(static_cast<Eigen::Index>(r));
        CHECK(testing::rank(rows, 1e-9) == static_cast<int>(d.rank));
      }
    }
  }
}

TEST_CASE("permutations are sound") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    const auto m = fixture(name).structure();
    const auto d = decompose(m);
    const auto n = static_cast<Eigen::Index>(m.dim());
    const auto r = static_cast<Eigen::Index>(d.rank);

    std::vector<std::size_t> sorted = d.row_perm;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == i);

    // Permute, then undo.
    SymbolicMatrix p(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) p(i, j) = m(d.row_perm[static_cast<std::size_t>(i)], d.col_perm[static_cast<std::size_t>(j)]);
    }
    SymbolicMatrix back(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) back(static_cast<Eigen::Index>(d.row_perm[static_cast<std::size_t>(i)]), static_cast<Eigen::Index>(d.col_perm[static_cast<std::size_t>(j)])) = p(i, j);
    }
    CHECK(back == m.entries());
    CHECK(p.topLeftCorner(r, r) == d.j2m);
    CHECK(p.bottomLeftCorner(n - r, r) == d.jrest);
    CHECK(d.det_verdict.kind == ZeroKind::NonZero);
  }
}
