#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "casimir/cost.hpp"
#include "casimir/integrator.hpp"
#include "casimir/system_file.hpp"
#include "casimir/verify.hpp"

namespace casimir {

using Json = nlohmann::ordered_json;

/// Pipeline prefixes; each stage runs everything before it. Cost runs
/// validation and rank only.
enum class Stage { Validate, Rank, Gamma, Casimirs, Cost, All };

struct PipelineOptions {
  std::uint64_t seed = 42;
  int samples = 20;
  double tolerance = 1e-9;
  bool flow = false;
  /// Expressions for verify-only mode; replaces the Casimir search.
  std::vector<std::string> verify;
};

enum ExitCode { kOk = 0, kUsage = 1, kValidation = 2, kAlgorithmic = 3 };

struct PipelineResult {
  Json report;
  int exit_code = kOk;
};

PipelineResult run_pipeline(const SystemFile& file, Stage stage, const PipelineOptions& options);

/// Report for `cost` given explicit sizes.
Json cost_json(const CostReport& c);

/// Human-readable rendering of a report produced by run_pipeline.
std::string render_text(const Json& report);

}  // namespace casimir
