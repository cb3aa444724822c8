#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmbench/table.hpp"

namespace qmbench {

inline constexpr const char* kArtifactVersion = "1.0.0";

// Dry-run finding; severity is "error", "warning", or "note".
struct Diagnostic {
  std::string severity;
  std::string message;
};

struct ScenarioInfo {
  std::string name;
  std::string module_name;
  std::string description;
  std::string anchor;  // concept the emitted tables demonstrate
  nlohmann::json defaults;
};

// Everything a run produces, in memory.  Callers decide whether to persist,
// which keeps reruns comparable byte-for-byte without touching the filesystem.
struct RunOutput {
  std::string scenario;
  std::string status;  // "ok" or "inconclusive"
  int exit_code = 0;   // 0 ok, 2 inconclusive
  std::map<std::string, std::string> files;  // filename -> bytes
  nlohmann::json manifest;
};

const std::vector<ScenarioInfo>& scenario_registry();
const ScenarioInfo& find_scenario(const std::string& name);

// Defaults overlaid with overrides; unknown keys and type mismatches throw.
nlohmann::json resolve_params(const ScenarioInfo& info, const nlohmann::json& overrides);

// Dry run: reports resolved parameters and anything that would make the run
// fail or produce untrustworthy output.  Never writes files.
std::vector<Diagnostic> validate_config(const std::string& name, const nlohmann::json& overrides);

RunOutput run_scenario(const std::string& name, const nlohmann::json& overrides);

// Persists tables plus manifest.json under out_dir/<scenario>/.
// Returns the directory written.  Nothing is written anywhere else.
std::string write_run(const RunOutput& run, const std::string& out_dir);

}  // namespace qmbench
