// Command-line front end for the scenario registry.
//
//   qmbench list
//   qmbench validate --scenario NAME [--config FILE] [--seed N] [--param k=v]...
//   qmbench run --scenario NAME [--config FILE] [--seed N] [--out DIR]
//               [--param k=v]... [--quiet]
//
// Exit codes: 0 success, 1 error, 2 the run finished but was inconclusive.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmbench/linalg.hpp"
#include "qmbench/scenario.hpp"

namespace {

using nlohmann::json;

json parse_param_value(const std::string& text) {
  json v = json::parse(text, nullptr, false);
  if (v.is_discarded()) return json(text);  // bare word: keep as string
  return v;
}

json assemble_overrides(const std::string& config_path,
                        const std::vector<std::string>& params, bool seed_given,
                        std::uint64_t seed) {
  json overrides = json::object();
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    if (!f) throw qmbench::qm_error("cannot read config file " + config_path);
    std::stringstream buf;
    buf << f.rdbuf();
    json cfg = json::parse(buf.str(), nullptr, false);
    if (cfg.is_discarded())
      throw qmbench::qm_error("config file " + config_path + " is not valid JSON");
    if (!cfg.is_object())
      throw qmbench::qm_error("config file must hold a JSON object of parameters");
    overrides = cfg;
  }
  for (const auto& kv : params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw qmbench::qm_error("--param expects key=value, got '" + kv + "'");
    overrides[kv.substr(0, eq)] = parse_param_value(kv.substr(eq + 1));
  }
  if (seed_given) overrides["seed"] = seed;
  return overrides;
}

std::string default_out_dir() {
  if (const char* env = std::getenv("QMBENCH_OUT"); env && *env) return env;
  return "qmbench-out";
}

int cmd_list() {
  for (const auto& info : qmbench::scenario_registry())
    std::printf("%-18s %-16s %s\n", info.name.c_str(), info.module_name.c_str(),
                info.description.c_str());
  return 0;
}

int cmd_validate(const std::string& scenario, const json& overrides) {
  const auto diags = qmbench::validate_config(scenario, overrides);
  bool any_error = false;
  for (const auto& d : diags) {
    if (d.severity == "error") any_error = true;
    std::printf("%s: %s\n", d.severity.c_str(), d.message.c_str());
  }
  return any_error ? 1 : 0;
}

int cmd_run(const std::string& scenario, const json& overrides, const std::string& out_dir,
            bool quiet) {
  const auto run = qmbench::run_scenario(scenario, overrides);
  const std::string dir = qmbench::write_run(run, out_dir);
  if (!quiet) {
    std::printf("wrote %s\n", dir.c_str());
    for (const auto& entry : run.manifest["files"])
      std::printf("  %-24s %8llu bytes  fnv1a64 %s\n",
                  entry["name"].get<std::string>().c_str(),
                  static_cast<unsigned long long>(entry["bytes"].get<std::size_t>()),
                  entry["fnv1a64"].get<std::string>().c_str());
    std::printf("status: %s\n", run.status.c_str());
  }
  return run.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qmbench: sequential-measurement probability test bench"};
  app.require_subcommand(1);

  CLI::App* sub_list = app.add_subcommand("list", "List registered scenarios");

  std::string scenario, config_path, out_dir = default_out_dir();
  std::vector<std::string> params;
  std::uint64_t seed = 0;
  bool quiet = false;

  auto add_common = [&](CLI::App* sub, bool with_out) {
    sub->add_option("--scenario", scenario, "Scenario name (see list)")->required();
    sub->add_option("--config", config_path, "JSON file of parameter overrides");
    sub->add_option("--seed", seed, "Override the scenario seed");
    sub->add_option("--param", params, "Single override as key=value (repeatable)");
    if (with_out) {
      sub->add_option("--out", out_dir,
                      "Output directory (default: $QMBENCH_OUT or ./qmbench-out)");
      sub->add_flag("--quiet", quiet, "Suppress the per-file report");
    }
    return sub;
  };
  CLI::App* sub_validate = add_common(
      app.add_subcommand("validate", "Dry-run a configuration and report findings"), false);
  CLI::App* sub_run = add_common(
      app.add_subcommand("run", "Run a scenario and write tables plus manifest"), true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sub_list->parsed()) return cmd_list();
    const bool seed_given =
        (sub_validate->parsed() ? sub_validate : sub_run)->count("--seed") > 0;
    const bool has_seed_param =
        qmbench::find_scenario(scenario).defaults.contains("seed");
    if (seed_given && !has_seed_param && !quiet)
      std::fprintf(stderr, "note: scenario '%s' takes no seed; --seed ignored\n",
                   scenario.c_str());
    json overrides =
        assemble_overrides(config_path, params, seed_given && has_seed_param, seed);
    if (sub_validate->parsed()) return cmd_validate(scenario, overrides);
    return cmd_run(scenario, overrides, out_dir, quiet);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
