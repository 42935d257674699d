// Acceptance suite: one PASS/FAIL line per criterion. With the path of the
// casimir executable as argument, determinism is also checked end to end.

#include <array>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "casimir/gamma.hpp"
#include "casimir/integrator.hpp"
#include "casimir/pipeline.hpp"
#include "support.hpp"

using namespace casimir;
using testing::fixture;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Discovery {
  SystemFile file;
  PivotDecomposition d;
  GammaMatrix g;
  std::vector<CasimirFamily> casimirs;
};

Discovery discover(std::string_view name) {
  SystemFile f = fixture(name);
  const StructureMatrix m = f.structure();
  PivotDecomposition d = decompose(m);
  GammaMatrix g = solve_gamma(m, d);
  auto cs = find_casimirs(m, g);
  return {std::move(f), std::move(d), std::move(g), std::move(cs)};
}

RationalFunction R(const SystemFile& f, std::string_view text) { return to_rational_function(f.expression(text)); }

Outcome criterion1() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto r = discover("lv3-j1");
  const double t = seconds_since(t0);
  o.require(r.g.at(2, 0) == R(r.file, "x3/(c*x1)"), "gamma 3 1");
  o.require(r.g.at(2, 1) == R(r.file, "b*x3/x2"), "gamma 3 2");
  o.require(r.casimirs.size() == 1, "one Casimir");
  if (r.casimirs.size() == 1) {
    o.require(testing::gradient_parallel(r.casimirs[0].primitive, r.file.expression("a*b*ln(x1) - b*ln(x2) + ln(x3)"), r.file),
              "gradient parallel");
    o.detail << " C = " << r.casimirs[0].primitive << ";";
  }
  o.require(t < 1.0, "runtime");
  o.detail << " " << t << " s";
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto r = discover("lv3-j2");
  o.require(r.casimirs.size() == 1, "one Casimir");
  if (r.casimirs.size() == 1) {
    o.require(testing::gradient_parallel(r.casimirs[0].primitive,
                                         r.file.expression("a*b*x1 + x2 - a*x3 + nu*ln(x2) - mu*ln(x3)"), r.file),
              "gradient parallel");
    o.detail << " C = " << r.casimirs[0].primitive;
  }
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto r = discover("light-top");
  std::vector<Expr> cs;
  for (const auto& c : r.casimirs) cs.push_back(c.primitive);
  const auto ind = verify_independence(r.file.structure(), cs);
  const double t = seconds_since(t0);
  o.require(r.d.rank == 4, "rank 4");
  o.require(std::vector<std::size_t>(r.d.dependent().begin(), r.d.dependent().end()) == std::vector<std::size_t>{2, 5},
            "dependent rows 3 and 6");
  const std::array<std::tuple<std::size_t, std::size_t, const char*>, 8> gamma = {{
      {2, 0, "-F1/F3"},
      {2, 1, "-F2/F3"},
      {2, 3, "(F1*M3 - M1*F3)/F3^2"},
      {2, 4, "(F2*M3 - M2*F3)/F3^2"},
      {5, 0, "0"},
      {5, 1, "0"},
      {5, 3, "-F1/F3"},
      {5, 4, "-F2/F3"},
  }};
  for (const auto& [dep, ind_row, text] : gamma) o.require(r.g.at(dep, ind_row) == R(r.file, text), text);
  for (const char* ref : {"F1^2 + F2^2 + F3^2", "M1*F1 + M2*F2 + M3*F3"}) {
    int matches = 0;
    for (const auto& c : cs) matches += testing::gradient_parallel(c, r.file.expression(ref), r.file);
    o.require(matches == 1, ref);
  }
  o.require(ind.rank == 2, "independence rank 2");
  o.require(t < 5.0, "runtime");
  o.detail << " " << t << " s";
  return o;
}

Outcome criterion4() {
  Outcome o;
  for (const auto& name : fixture_names()) {
    const auto report = check_jacobi(fixture(name).structure());
    o.require(report.valid(), name);
  }
  SystemFile mutant = fixture("lv3-j1");
  for (auto& [i, j, text] : mutant.entries) {
    if (i == 0 && j == 1) text = "c*x1";
  }
  const auto report = check_jacobi(mutant.structure());
  o.require(!report.valid(), "mutant rejected");
  for (const auto& v : report.violations) {
    o.detail << " mutant fails triple (" << v.indices[0] + 1 << "," << v.indices[1] + 1 << "," << v.indices[2] + 1 << ")";
  }
  o.detail << "; " << fixture_names().size() << " fixtures valid";
  return o;
}

Outcome criterion5() {
  Outcome o;
  double worst = 0;
  for (const auto& name : fixture_names()) {
    const auto r = discover(name);
    for (const auto& p : testing::points(r.file, 20, 2024)) {
      const Eigen::MatrixXd j = testing::structure_at(r.file, p);
      for (std::size_t dep : r.g.dependent) {
        Eigen::RowVectorXd row = j.row(static_cast<Eigen::Index>(dep));
        for (std::size_t k : r.g.independent) {
          row -= testing::value(to_expr(r.g.at(dep, k)), p) * j.row(static_cast<Eigen::Index>(k));
        }
        worst = std::max(worst, row.cwiseAbs().maxCoeff());
      }
    }
  }
  o.require(worst < 1e-9, "residual");
  o.detail << " max residual " << worst;
  return o;
}

Outcome criterion6() {
  Outcome o;
  PipelineOptions opts;
  opts.flow = true;
  double own = 0;
  double random = 0;
  for (const auto& name : fixture_names()) {
    const auto r = run_pipeline(fixture(name), Stage::All, opts);
    o.require(r.exit_code == kOk, name + ": " + r.report["status"].dump());
    if (r.exit_code != kOk) continue;
    const Json& v = r.report["verification"];
    const Json& f = v["flow"];
    o.require(f["casimirs_conserved"].get<bool>() && f["hamiltonian_conserved"].get<bool>(), name + " own Hamiltonian");
    own = std::max(own, f["max_hamiltonian_drift"].get<double>());
    for (const auto& c : f["casimirs"]) own = std::max(own, c["max_drift"].get<double>());
    o.require(v["random_hamiltonians"].size() == 3, name + " three random Hamiltonians");
    for (const auto& h : v["random_hamiltonians"]) {
      o.require(h["casimirs_conserved"].get<bool>(), name + " random Hamiltonian");
      for (const auto& c : h["casimirs"]) random = std::max(random, c["max_drift"].get<double>());
    }
  }
  o.detail << " max drift " << own << " (fixture H), " << random << " (random H)";
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto a = cost(3, 2);
  const auto b = cost(6, 4);
  o.require(a.ratio && *a.ratio == Rational(1, 2), "n=3, 2m=2");
  o.require(b.ratio && *b.ratio == Rational(1, 8), "n=6, 2m=4");
  int checked = 0;
  for (std::size_t n = 3; n <= 12; ++n) {
    for (std::size_t m2 = 2; m2 < n; m2 += 2) {
      const auto c = cost(n, m2);
      o.require(c.ratio && *c.ratio < Rational(1), "n=" + std::to_string(n) + " 2m=" + std::to_string(m2));
      ++checked;
    }
  }
  o.detail << " 1/2, 1/8, ratio < 1 for " << checked << " sizes";
  return o;
}

std::string run_command(const std::string& cmd) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return out;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  pclose(pipe);
  return out;
}

Outcome criterion8(const char* cli) {
  Outcome o;
  PipelineOptions opts;
  opts.seed = 42;
  for (const auto& name : fixture_names()) {
    const auto f = fixture(name);
    o.require(run_pipeline(f, Stage::All, opts).report.dump() == run_pipeline(f, Stage::All, opts).report.dump(), name);
    if (cli != nullptr) {
      const std::string cmd = std::string("\"") + cli + "\" all --seed 42 --json " + name;
      const std::string first = run_command(cmd);
      o.require(!first.empty() && first == run_command(cmd), name + " via CLI");
    }
  }
  o.detail << (cli != nullptr ? " in process and via the CLI" : " in process");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const char* cli = argc > 1 ? argv[1] : nullptr;
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"first Lotka-Volterra structure: gamma and Casimir", criterion1},
      {"second Lotka-Volterra structure: Casimir", criterion2},
      {"light top: rank, gamma, Casimirs, independence", criterion3},
      {"Jacobi validation of fixtures and mutant", criterion4},
      {"degeneracy relation residuals", criterion5},
      {"flow conservation", criterion6},
      {"cost report", criterion7},
  };
  int failed = 0;
  int index = 0;
  auto report = [&](const char* title, Outcome o) {
    ++index;
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << index << " " << title << ":" << o.detail.str() << '\n';
  };
  for (const auto& [title, run] : criteria) {
    try {
      report(title, run());
    } catch (const std::exception& e) {
      Outcome o;
      o.require(false, e.what());
      report(title, std::move(o));
    }
  }
  try {
    report("determinism", criterion8(cli));
  } catch (const std::exception& e) {
    Outcome o;
    o.require(false, e.what());
    report("determinism", std::move(o));
  }
  return failed == 0 ? 0 : 1;
}
