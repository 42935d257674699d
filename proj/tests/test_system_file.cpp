#include <doctest.h>

#include "casimir/gamma.hpp"
#include "casimir/integrator.hpp"
#include "casimir/pipeline.hpp"
#include "support.hpp"

using namespace casimir;
using testing::fixture;

namespace {

int error_line(std::string_view text) {
  try {
    parse_system_file(text);
  } catch (const SystemFileError& e) {
    return static_cast<int>(e.line());
  }
  return 0;
}

}  // namespace

TEST_CASE("parsing a small system") {
  const auto f = parse_system_file(R"(# comment
system demo
vars x y z
params k
let s = k*x   # trailing comment
J[1][2] = s
J[2][3] = x
H = x^2 + y
domain x y > 0
domain z real
)");
  CHECK(f.name == "demo");
  CHECK(f.vars == std::vector<std::string>{"x", "y", "z"});
  CHECK(f.params == std::vector<std::string>{"k"});
  CHECK(f.entries.size() == 2);
  REQUIRE(f.hamiltonian);
  CHECK_FALSE(f.expect);

  const auto m = f.structure();
  CHECK(m(0, 1) == to_rational_function(f.expression("k*x")));
  CHECK(m(1, 0) == -m(0, 1));
  CHECK(m(2, 1) == -m(1, 2));
  CHECK(m(0, 0).is_zero());
  CHECK(m(0, 2).is_zero());
  CHECK(m.domain().sign(0) == Sign::Positive);
  CHECK(m.domain().sign(2) == Sign::Any);
  CHECK(m.domain().sign(3) == Sign::Positive);
}

TEST_CASE("comma separated names and expectations") {
  const auto f = parse_system_file(R"(
vars x, y
J[1][2] = 1
expect
  rank 2
  dependent
  ratio none
  origin rank trivial full rank
end
)");
  REQUIRE(f.expect);
  CHECK(f.expect->rank == 2u);
  REQUIRE(f.expect->dependent);
  CHECK(f.expect->dependent->empty());
  CHECK(f.expect->ratio == "none");
  CHECK(f.expect->origin.at("rank") == "trivial full rank");
}

TEST_CASE("malformed files name the offending line") {
  CHECK(error_line("vars x y\nJ[2][1] = x\n") == 2);
  CHECK(error_line("vars x y\nJ[1][3] = x\n") == 2);
  CHECK(error_line("vars x y\nJ[1][2] = x\nJ[1][2] = y\n") == 3);
  CHECK(error_line("vars x y\n\nJ[1][2] = q\n") == 3);
  CHECK(error_line("vars x y\nJ[1][2] = x +\n") == 2);
  CHECK(error_line("J[1][2] = x\n") == 1);
  CHECK(error_line("vars x\nfrobnicate\n") == 2);
  CHECK(error_line("vars x\nexpect\nrank 2\n") == 2);
  CHECK(error_line("vars x\ndomain w > 0\n") == 2);
  CHECK(error_line("vars x x\n") == 1);
  CHECK(error_line("# nothing\n") == 1);
}

TEST_CASE("bundled fixtures") {
  const auto names = fixture_names();
  for (const char* n : {"constant4", "light-top", "lv3-j1", "lv3-j2", "so3", "symplectic2"}) {
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  }
  CHECK_THROWS_AS(load_fixture("no-such-system"), InvalidArgument);

  const auto j1 = load_fixture("lv3-j1");
  CHECK(j1.system.name == "lv3-j1");
  CHECK(j1.system.lets.front() == std::pair<std::string, std::string>{"c", "-1/(a*b)"});
  CHECK(to_rational_function(j1.system.expression("a*b*c")) == RationalFunction(-1));
  CHECK(load_fixture("light-top").system.expect->rank == 4u);
  const auto so3 = fixture("so3");
  CHECK(so3.structure()(0, 1) == to_rational_function(so3.expression("x3")));
  CHECK(so3.structure()(0, 2) == to_rational_function(so3.expression("-x2")));
  CHECK(so3.structure()(1, 2) == to_rational_function(so3.expression("x1")));
}

TEST_CASE("every fixture is a valid Poisson structure") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    const auto m = fixture(name).structure();
    CHECK(check_skew(m).valid());
    CHECK(check_jacobi(m).valid());
  }
}

TEST_CASE("every fixture Hamiltonian and expected Casimir is consistent") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    const SystemFile f = fixture(name);
    REQUIRE(f.expect);
    REQUIRE(f.hamiltonian);
    for (const auto& text : f.expect->casimirs) {
      CAPTURE(text);
      for (const auto& p : testing::points(f, 10, 3)) CHECK(testing::casimir_residual(f, f.expression(text), p) < 1e-9);
    }
  }
}

TEST_CASE("pipeline output matches fixture expectations") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    const SystemFile f = fixture(name);
    const auto& e = *f.expect;
    const auto m = f.structure();
    const auto d = decompose(m);
    if (e.rank) CHECK(d.rank == *e.rank);
    if (e.dependent) CHECK(std::vector<std::size_t>(d.dependent().begin(), d.dependent().end()) == *e.dependent);
    const auto g = solve_gamma(m, d);
    for (const auto& entry : e.gamma) CHECK(g.at(entry.dependent, entry.independent) == to_rational_function(f.expression(entry.text)));

    const auto found = find_casimirs(m, g);
    REQUIRE(found.size() == e.casimirs.size());
    // Each expected Casimir is parallel to exactly one discovered primitive.
    for (const auto& text : e.casimirs) {
      int matches = 0;
      for (const auto& c : found) matches += testing::gradient_parallel(c.primitive, f.expression(text), f);
      CHECK(matches == 1);
    }

    if (e.ratio) {
      const Json c = cost_json(cost(m.dim(), d.rank));
      if (*e.ratio == "none") {
        CHECK(c["ratio"].is_null());
      } else {
        CHECK(c["ratio"].get<std::string>() == *e.ratio);
      }
    }
  }
}
