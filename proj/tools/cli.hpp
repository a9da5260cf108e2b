#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "osc/json_io.hpp"

namespace osc::cli {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";
/// Overrides the default tolerance of float-mode decisions.
inline constexpr const char* kToleranceEnv = "OSC_FLOAT_TOLERANCE";

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitVerification = 3;

struct RunConfig {
  std::string command;     // "quotient"
  std::string subcommand;  // "classify"
  /// Compact name or JSON text; empty when the verb takes none.
  std::string lattice;
  /// Verb options keyed by their snake_case names. Values are strings or JSON.
  Json params = Json::object();
  std::uint64_t seed = 1;
  /// Requested arithmetic; verbs that support only one mode say so in diagnostics.
  bool exact = true;
};

/// Reads {"command": "quotient classify", "lattice": …, "params": {…}, "seed": 1, "exact": true}.
RunConfig config_from_json(const Json& j);

struct RunResult {
  int exit_code = kExitOk;
  Json report;
  /// Sample rows for `geodesic eval`; empty for other verbs.
  std::string csv;
};

/// Validates the config and runs one verb. Never throws.
RunResult run(const RunConfig& config);

struct ParamSpec {
  std::string key;
  std::string help;
};

struct VerbSpec {
  std::string command;
  std::string subcommand;
  std::string help;
  enum class LatticeUse { None, Optional, Required } lattice = LatticeUse::None;
  std::vector<ParamSpec> params;
};

const std::vector<VerbSpec>& verbs();

/// Command-line entry: parses argv with CLI11, runs, writes the report and CSV.
int main_with_args(int argc, const char* const* argv);

}  // namespace osc::cli
