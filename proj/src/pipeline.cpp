#include "casimir/pipeline.hpp"

#include <sstream>

namespace casimir {

namespace {

std::string str(const RationalFunction& f) { return to_string(to_expr(f)); }

Json one_based(std::span<const std::size_t> v) {
  Json a = Json::array();
  for (std::size_t x : v) a.push_back(x + 1);
  return a;
}

Json findings(const std::vector<Finding>& fs) {
  Json a = Json::array();
  for (const auto& f : fs) {
    a.push_back({{"indices", one_based(f.indices)},
                 {"residual", str(f.residual)},
                 {"verdict", to_string(f.verdict.kind)},
                 {"samples", f.verdict.samples}});
  }
  return a;
}

Json validation_json(const ValidationReport& r) {
  return {{"valid", r.valid()},
          {"checked", r.checked},
          {"violations", findings(r.violations)},
          {"probable", findings(r.probable)}};
}

Json flow_json(const FlowReport& f, const std::vector<Expr>& cs, const Expr& h) {
  Json trajectories = Json::array();
  for (const auto& t : f.trajectories) {
    Json initial = Json::array();
    for (Eigen::Index i = 0; i < t.initial.size(); ++i) initial.push_back(t.initial(i));
    trajectories.push_back({{"initial", initial},
                            {"steps", t.steps},
                            {"t_reached", t.t_reached},
                            {"partial", t.partial},
                            {"note", t.note},
                            {"casimir_drift", t.casimir_drift},
                            {"hamiltonian_drift", t.hamiltonian_drift}});
  }
  Json drift = Json::array();
  for (std::size_t c = 0; c < cs.size(); ++c) {
    drift.push_back({{"expression", to_string(cs[c])}, {"max_drift", f.max_casimir_drift[c]}});
  }
  return {{"hamiltonian", to_string(h)},
          {"t_end", f.options.t_end},
          {"dt", f.options.dt},
          {"tolerance", f.options.tolerance},
          {"seed", f.options.seed},
          {"casimirs", drift},
          {"max_hamiltonian_drift", f.max_hamiltonian_drift},
          {"casimirs_conserved", f.casimirs_conserved},
          {"hamiltonian_conserved", f.hamiltonian_conserved},
          {"worst_ratio", f.worst_ratio},
          {"trajectories", trajectories}};
}

struct StageFailure {
  int code;
  std::string stage;
  std::string diagnostic;
};

}  // namespace

Json cost_json(const CostReport& c) {
  Json j = {{"n", c.n}, {"rank", c.two_m}, {"Na", c.na}, {"Nc", c.nc}};
  j["ratio"] = c.ratio ? Json(c.ratio->get_str()) : Json(nullptr);
  if (!c.degenerate.empty()) j["degenerate"] = c.degenerate;
  return j;
}

PipelineResult run_pipeline(const SystemFile& file, Stage stage, const PipelineOptions& options) {
  PipelineResult result;
  Json& r = result.report;
  r["system"] = file.name;
  r["seed"] = options.seed;
  r["samples"] = options.samples;
  r["tolerance"] = options.tolerance;
  r["variables"] = file.vars;
  r["parameters"] = file.params;
  Json bindings = Json::object();
  std::string stage_name = "parse";
  try {
    for (const auto& [name, e] : file.bindings()) bindings[name] = to_string(e);
    r["bindings"] = bindings;
    const StructureMatrix m = file.structure();
    const VariableSet& vars = m.vars();
    ZeroTestOptions zopt{options.samples, options.tolerance, options.seed};

    stage_name = "validate";
    const ValidationReport skew = check_skew(m, zopt);
    Json validation = {{"skew", validation_json(skew)}};
    if (skew.valid()) {
      validation["jacobi"] = validation_json(check_jacobi(m, zopt));
    }
    r["validation"] = validation;
    if (!skew.valid()) throw StageFailure{kValidation, stage_name, "structure matrix is not skew-symmetric"};
    if (!validation["jacobi"]["valid"].get<bool>()) {
      throw StageFailure{kValidation, stage_name, "Jacobi identity fails"};
    }
    if (stage == Stage::Validate) {
      r["status"] = {{"ok", true}, {"exit_code", kOk}};
      return result;
    }

    std::vector<Expr> casimirs;
    std::size_t rank = 0;
    if (options.verify.empty()) {
      stage_name = "rank";
      const PivotDecomposition d = decompose(m, RankOptions{7, 1e-9, options.seed});
      rank = d.rank;
      r["rank"] = {{"rank", d.rank},
                   {"sampled", d.sampled_ranks},
                   {"independent_rows", one_based(d.independent())},
                   {"dependent_rows", one_based(d.dependent())},
                   {"row_permutation", one_based(d.row_perm)},
                   {"column_permutation", one_based(d.col_perm)},
                   {"pivot_determinant", str(d.det)},
                   {"determinant_verdict", to_string(d.det_verdict.kind)}};
      if (stage == Stage::Cost) r["cost"] = cost_json(cost(m.dim(), rank));

      if (stage == Stage::Gamma || stage == Stage::Casimirs || stage == Stage::All) {
        stage_name = "gamma";
        const GammaMatrix g = solve_gamma(m, d, GammaOptions{100000, options.samples, options.seed + 1});
        Json entries = Json::array();
        for (std::size_t c = 0; c < g.dependent.size(); ++c) {
          for (std::size_t k = 0; k < g.independent.size(); ++k) {
            entries.push_back({{"dependent", g.dependent[c] + 1},
                               {"independent", g.independent[k] + 1},
                               {"value", str(g.gamma(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)))}});
          }
        }
        r["gamma"] = {{"method", to_string(g.method)},
                      {"entries", entries},
                      {"max_numeric_residual", g.max_numeric_residual},
                      {"samples", g.numeric_samples}};

        if (stage == Stage::Casimirs || stage == Stage::All) {
          stage_name = "casimirs";
          EtaOptions eopt;
          eopt.seed = options.seed + 2;
          eopt.zero = zopt;
          const auto forms = build_forms(m, g);
          Json fs = Json::array();
          for (const auto& w : forms) {
            Json coefficients = Json::object();
            for (std::size_t a = 0; a < w.coefficients.size(); ++a) {
              if (!w.coefficients[a].is_zero()) coefficients[vars.symbol(a)] = str(w.coefficients[a]);
            }
            const IntegratingFactor eta = find_eta(w, forms, vars, m.domain(), eopt);
            const CasimirFamily fam = integrate(w, eta, forms, vars, m.domain(), zopt);
            Json companions = Json::array();
            for (const auto& c : eta.companions) {
              companions.push_back({{"row", c.form + 1}, {"multiplier", str(c.multiplier)}});
            }
            fs.push_back({{"row", w.index + 1},
                          {"coefficients", coefficients},
                          {"eta", str(eta.eta)},
                          {"eta_source", to_string(eta.source)},
                          {"companions", companions},
                          {"primitive", to_string(fam.primitive)}});
            casimirs.push_back(fam.primitive);
          }
          r["casimirs"] = {{"count", forms.size()}, {"forms", fs}};
          if (forms.empty()) r["casimirs"]["note"] = "no Casimirs (rank = n)";
        }
      }
    } else {
      stage_name = "parse";
      for (const auto& text : options.verify) casimirs.push_back(file.expression(text));
    }

    if (stage == Stage::All || !options.verify.empty()) {
      stage_name = "verify";
      VerifyOptions vopt;
      vopt.seed = options.seed + 3;
      vopt.zero = zopt;
      vopt.tolerance = options.tolerance;
      Json checks = Json::array();
      bool ok = true;
      for (const auto& c : casimirs) {
        const CasimirCheck check = verify_casimir(m, c, vopt);
        Json comps = Json::array();
        for (std::size_t i = 0; i < check.verdicts.size(); ++i) {
          comps.push_back({{"row", i + 1}, {"verdict", to_string(check.verdicts[i].kind)}});
        }
        checks.push_back({{"expression", to_string(c)},
                          {"components", comps},
                          {"max_residual", check.max_residual},
                          {"max_scaled_residual", check.max_scaled_residual},
                          {"samples", check.samples},
                          {"passed", check.passed()}});
        ok = ok && check.passed();
      }
      Json verification = {{"casimirs", checks}};
      if (!casimirs.empty()) {
        const IndependenceCheck ind = verify_independence(m, casimirs, 10, options.seed + 4);
        verification["independence"] = {{"rank", ind.rank}, {"sampled", ind.sampled}};
        if (options.verify.empty() && ind.rank != static_cast<int>(casimirs.size())) ok = false;
      }
      if (options.flow) {
        stage_name = "flow";
        const auto h = file.hamiltonian_expr();
        if (!h) throw StageFailure{kUsage, stage_name, "flow verification needs a Hamiltonian (H = ...)"};
        FlowOptions fopt;
        fopt.seed = options.seed + 5;
        const FlowReport fr = verify_flow(m, *h, casimirs, fopt);
        verification["flow"] = flow_json(fr, casimirs, *h);
        ok = ok && fr.casimirs_conserved && fr.hamiltonian_conserved;
        Json randoms = Json::array();
        for (int k = 0; k < 3; ++k) {
          const Expr hk = random_quadratic_hamiltonian(vars, options.seed + 100 + static_cast<std::uint64_t>(k));
          FlowOptions ropt = fopt;
          ropt.seed = options.seed + 200 + static_cast<std::uint64_t>(k);
          ropt.tolerance = 1e-5;
          const FlowReport rk = verify_flow(m, hk, casimirs, ropt);
          randoms.push_back(flow_json(rk, casimirs, hk));
          ok = ok && rk.casimirs_conserved;
        }
        verification["random_hamiltonians"] = randoms;
      }
      r["verification"] = verification;
      if (!ok) throw StageFailure{kValidation, "verify", "a candidate failed verification"};
    }

    if (stage == Stage::All && options.verify.empty()) {
      stage_name = "cost";
      r["cost"] = cost_json(cost(m.dim(), rank));
    }
    r["status"] = {{"ok", true}, {"exit_code", kOk}};
  } catch (const StageFailure& f) {
    result.exit_code = f.code;
    r["status"] = {{"ok", false}, {"exit_code", f.code}, {"failed_stage", f.stage}, {"diagnostic", f.diagnostic}};
  } catch (const Error& e) {
    const bool algorithmic = dynamic_cast<const RankInstability*>(&e) || dynamic_cast<const CertificationFailure*>(&e) ||
                             dynamic_cast<const IntegratingFactorNotFound*>(&e) ||
                             dynamic_cast<const AntiderivativeOutsideClass*>(&e) || dynamic_cast<const FlowError*>(&e);
    result.exit_code = algorithmic ? kAlgorithmic : kUsage;
    r["status"] = {{"ok", false}, {"exit_code", result.exit_code}, {"failed_stage", stage_name}, {"diagnostic", e.what()}};
  }
  return result;
}

namespace {

void line(std::ostringstream& os, int indent, const std::string& text) {
  os << std::string(static_cast<std::size_t>(indent) * 2, ' ') << text << '\n';
}

std::string list(const Json& a) {
  std::string s;
  for (const auto& x : a) s += (s.empty() ? "" : " ") + (x.is_string() ? x.get<std::string>() : x.dump());
  return s;
}

void render_validation(std::ostringstream& os, const std::string& name, const Json& v) {
  line(os, 1, name + ": " + (v["valid"].get<bool>() ? "ok" : "FAILED") + " (" + v["checked"].dump() + " checked)");
  for (const auto& f : v["violations"]) line(os, 2, "violation at (" + list(f["indices"]) + "): " + f["residual"].get<std::string>());
  for (const auto& f : v["probable"]) {
    line(os, 2, "probably zero at (" + list(f["indices"]) + ") after " + f["samples"].dump() + " samples");
  }
}

void render_flow(std::ostringstream& os, const Json& f) {
  line(os, 2, "H = " + f["hamiltonian"].get<std::string>() + ": max drift " + f["max_hamiltonian_drift"].dump());
  for (const auto& c : f["casimirs"]) line(os, 3, c["expression"].get<std::string>() + ": max drift " + c["max_drift"].dump());
  for (const auto& t : f["trajectories"]) {
    if (t["partial"].get<bool>()) line(os, 3, "partial trajectory stopped at t = " + t["t_reached"].dump() + ": " + t["note"].get<std::string>());
  }
}

}  // namespace

std::string render_text(const Json& r) {
  std::ostringstream os;
  if (r.contains("system")) {
    line(os, 0, "system " + r["system"].get<std::string>() + "  (seed " + r["seed"].dump() + ")");
    line(os, 1, "variables: " + list(r["variables"]));
    if (!r["parameters"].empty()) line(os, 1, "parameters: " + list(r["parameters"]));
    if (r.contains("bindings")) {
      for (const auto& [k, v] : r["bindings"].items()) line(os, 1, k + " := " + v.get<std::string>());
    }
  }
  if (r.contains("validation")) {
    line(os, 0, "validation");
    render_validation(os, "skew-symmetry", r["validation"]["skew"]);
    if (r["validation"].contains("jacobi")) render_validation(os, "Jacobi identity", r["validation"]["jacobi"]);
  }
  if (r.contains("rank")) {
    const auto& k = r["rank"];
    line(os, 0, "rank " + k["rank"].dump() + " (sampled: " + list(k["sampled"]) + ")");
    line(os, 1, "independent rows: " + list(k["independent_rows"]));
    line(os, 1, "dependent rows: " + list(k["dependent_rows"]));
    line(os, 1, "pivot block determinant: " + k["pivot_determinant"].get<std::string>());
  }
  if (r.contains("gamma")) {
    const auto& g = r["gamma"];
    line(os, 0, "gamma (" + g["method"].get<std::string>() + ", max residual " + g["max_numeric_residual"].dump() + ")");
    for (const auto& e : g["entries"]) {
      line(os, 1, "gamma[" + e["dependent"].dump() + "][" + e["independent"].dump() + "] = " + e["value"].get<std::string>());
    }
  }
  if (r.contains("casimirs")) {
    const auto& c = r["casimirs"];
    line(os, 0, "casimirs: " + c["count"].dump());
    if (c.contains("note")) line(os, 1, c["note"].get<std::string>());
    for (const auto& f : c["forms"]) {
      line(os, 1, "row " + f["row"].dump() + ": eta = " + f["eta"].get<std::string>() + " [" +
                      f["eta_source"].get<std::string>() + "]");
      for (const auto& comp : f["companions"]) {
        line(os, 2, "plus (" + comp["multiplier"].get<std::string>() + ") times the form of row " + comp["row"].dump());
      }
      line(os, 2, "C = " + f["primitive"].get<std::string>());
    }
    if (c["count"].get<int>() > 0) line(os, 1, "any smooth function of these primitives is also a Casimir");
  }
  if (r.contains("verification")) {
    const auto& v = r["verification"];
    line(os, 0, "verification");
    for (const auto& c : v["casimirs"]) {
      line(os, 1, c["expression"].get<std::string>() + ": " + (c["passed"].get<bool>() ? "passed" : "FAILED") +
                      " (max |J.grad C| = " + c["max_residual"].dump() + " over " + c["samples"].dump() + " points)");
    }
    if (v.contains("independence")) line(os, 1, "independence rank: " + v["independence"]["rank"].dump());
    if (v.contains("flow")) {
      line(os, 1, "flow (RK4, dt " + v["flow"]["dt"].dump() + ", t_end " + v["flow"]["t_end"].dump() + ")");
      render_flow(os, v["flow"]);
      for (const auto& f : v["random_hamiltonians"]) render_flow(os, f);
    }
  }
  if (r.contains("cost")) {
    const auto& c = r["cost"];
    std::string ratio = c["ratio"].is_null() ? c.value("degenerate", std::string("undefined")) : c["ratio"].get<std::string>();
    line(os, 0, "cost: n = " + c["n"].dump() + ", 2m = " + c["rank"].dump() + ", Na = " + c["Na"].dump() +
                    ", Nc = " + c["Nc"].dump() + ", Na/Nc = " + ratio);
  }
  if (r.contains("status")) {
    const auto& s = r["status"];
    if (s["ok"].get<bool>()) {
      line(os, 0, "status: ok");
    } else {
      line(os, 0, "status: FAILED in stage " + s["failed_stage"].get<std::string>() + ": " + s["diagnostic"].get<std::string>());
    }
  }
  return os.str();
}

}  // namespace casimir
