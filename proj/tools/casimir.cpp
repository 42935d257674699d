#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "casimir/fixtures.hpp"
#include "casimir/pipeline.hpp"

using namespace casimir;

namespace {

// A path, or failing that the name of a bundled fixture.
SystemFile load(const std::string& source) {
  if (std::filesystem::exists(source)) return load_system_file(source);
  return load_fixture(source).system;
}

int emit(const Json& report, bool json) {
  if (json) {
    std::cout << report.dump(2) << '\n';
  } else {
    std::cout << render_text(report);
  }
  return report.contains("status") ? report["status"]["exit_code"].get<int>() : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Casimir invariants of finite-dimensional Poisson systems"};
  app.require_subcommand(1);
  app.fallthrough();

  PipelineOptions options;
  bool json = false;
  app.add_option("--seed", options.seed, "Seed for every random sample")->capture_default_str();
  app.add_option("--samples", options.samples, "Points per probabilistic zero test")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--tol", options.tolerance, "Relative tolerance of zero tests and residuals")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--flow", options.flow, "Also integrate Hamiltonian flows (needs H in the file)");
  app.add_flag("--json", json, "Machine-readable report");

  std::string source;
  const std::vector<std::pair<std::string, Stage>> stages = {
      {"validate", Stage::Validate}, {"rank", Stage::Rank}, {"gamma", Stage::Gamma},
      {"casimirs", Stage::Casimirs}, {"all", Stage::All}};
  const std::map<std::string, std::string> help = {
      {"validate", "Check skew-symmetry and the Jacobi identity"},
      {"rank", "Generic rank and pivot decomposition"},
      {"gamma", "Degeneracy coefficients of the dependent rows"},
      {"casimirs", "Pfaffian forms, integrating factors and Casimir primitives"},
      {"all", "Every stage, verification and the cost report"}};
  for (const auto& [name, stage] : stages) {
    auto* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("system", source, "System file or fixture name")->required();
  }

  std::vector<std::string> exprs;
  auto* verify = app.add_subcommand("verify", "Verify candidate Casimirs given as expressions");
  verify->add_option("system", source, "System file or fixture name")->required();
  verify->add_option("expr", exprs, "Candidate expressions")->required();

  std::size_t n = 0;
  std::size_t rank = 0;
  auto* cost_cmd = app.add_subcommand("cost", "Quadrature counts of both methods");
  cost_cmd->add_option("system", source, "System file or fixture name");
  auto* n_opt = cost_cmd->add_option("--n", n, "Dimension");
  auto* r_opt = cost_cmd->add_option("--rank", rank, "Rank 2m");
  n_opt->needs(r_opt);
  r_opt->needs(n_opt);

  app.add_subcommand("fixtures", "List the bundled fixtures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "fixtures") {
      for (const auto& f : fixture_names()) std::cout << f << '\n';
      return kOk;
    }
    if (name == "cost") {
      if (*n_opt) {
        Json report = {{"cost", cost_json(cost(n, rank))}};
        return emit(report, json);
      }
      if (source.empty()) {
        std::cerr << "cost: give a system file or --n and --rank\n";
        return kUsage;
      }
      return emit(run_pipeline(load(source), Stage::Cost, options).report, json);
    }
    if (name == "verify") {
      options.verify = exprs;
      return emit(run_pipeline(load(source), Stage::All, options).report, json);
    }
    for (const auto& [stage_name, stage] : stages) {
      if (stage_name == name) return emit(run_pipeline(load(source), stage, options).report, json);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
