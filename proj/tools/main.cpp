// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0
//
// Batch entry point. Subcommands:
//   run              load a scenario, execute its experiments, write CSVs
//   replay           run the host association logic over a recorded trace
//   list-scenarios   show bundled scenario names
//   validate-config  parse and validate a scenario file
//
// Exit codes: 0 success, 1 check failure (--check), 2 configuration or
// input error, 3 I/O error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "syncsim/csv.hpp"
#include "syncsim/errors.hpp"
#include "syncsim/runner.hpp"
#include "syncsim/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

std::string default_out_dir(const std::string& flag_value,
                            const std::string& scenario_name) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("SYNCSIM_OUTPUT_DIR")) {
    return std::string(env) + "/" + scenario_name;
  }
  return "syncsim-out/" + scenario_name;
}

int cmd_run(const std::string& scenario_arg,
            const std::vector<std::string>& overrides,
            const std::string& out_flag, bool check, bool no_artifacts) {
  syncsim::ScenarioConfig cfg;
  try {
    cfg = syncsim::load_scenario(scenario_arg, overrides);
  } catch (const syncsim::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  std::string out_dir =
      no_artifacts ? std::string{} : default_out_dir(out_flag, cfg.name);
  syncsim::RunOutcome outcome;
  try {
    outcome = syncsim::run_scenario(cfg, out_dir);
  } catch (const syncsim::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const syncsim::SimError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  for (const auto& [key, value] : outcome.metrics) {
    std::printf("%-42s %s\n", key.c_str(),
                syncsim::format_double(value).c_str());
  }
  if (!outcome.checks.empty()) {
    std::printf("\nchecks:\n");
    for (const auto& c : outcome.checks) {
      std::printf("  %-40s %s %-12s actual=%-14s %s\n", c.spec.metric.c_str(),
                  c.spec.op.c_str(),
                  syncsim::format_double(c.spec.value).c_str(),
                  syncsim::format_double(c.actual).c_str(),
                  c.pass ? "PASS" : "FAIL");
    }
  }
  if (!out_dir.empty()) {
    std::printf("\nartifacts: %s\n", out_dir.c_str());
  }
  if (check && !outcome.all_checks_passed) return kExitCheckFailed;
  return kExitOk;
}

int cmd_replay(const std::string& trace_path, const std::string& out_flag,
               double match_threshold_ms, double frame_period_ms) {
  std::ifstream in(trace_path);
  if (!in) {
    std::cerr << "error: cannot open trace '" << trace_path << "'\n";
    return kExitIo;
  }
  syncsim::SyncConfig sync_cfg;
  sync_cfg.match_threshold = syncsim::SimTime{llround(match_threshold_ms * 1e6)};
  sync_cfg.frame_period = syncsim::SimTime{llround(frame_period_ms * 1e6)};
  std::string out_dir = default_out_dir(out_flag, "replay");
  try {
    auto outcome = syncsim::replay_trace(in, sync_cfg, out_dir);
    std::printf("stamped=%zu imu=%zu diagnostics=%zu\n", outcome.stamped.size(),
                outcome.imu.size(), outcome.diagnostics.size());
    std::printf("artifacts: %s\n", out_dir.c_str());
  } catch (const syncsim::TraceFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const syncsim::SimError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

int cmd_list() {
  for (const auto& [name, text] : syncsim::builtin_scenarios()) {
    auto j = nlohmann::json::parse(text);
    std::printf("%-14s %s\n", name.c_str(),
                j.value("description", "").c_str());
  }
  return kExitOk;
}

int cmd_validate(const std::string& path,
                 const std::vector<std::string>& overrides) {
  try {
    syncsim::ScenarioConfig cfg = syncsim::load_scenario(path, overrides);
    std::printf("ok: scenario '%s' (hash %s)\n", cfg.name.c_str(),
                syncsim::config_hash(cfg).c_str());
    return kExitOk;
  } catch (const syncsim::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-sensor trigger and clock-translation simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a scenario's experiments");
  std::string scenario;
  std::string out_dir;
  std::vector<std::string> overrides;
  bool check = false;
  bool no_artifacts = false;
  run->add_option("scenario", scenario,
                  "Bundled scenario name or path to a scenario JSON file")
      ->required();
  run->add_option("--out", out_dir, "Output directory for CSV artifacts");
  run->add_option("--set", overrides,
                  "Dotted-path config override, e.g. seed=7 or "
                  "cameras.1.trigger_line_delay_us=700");
  run->add_flag("--check", check,
                "Exit nonzero unless every scenario check passes");
  run->add_flag("--no-artifacts", no_artifacts, "Compute metrics only");

  auto* replay = app.add_subcommand("replay", "Replay a recorded message trace");
  std::string trace_path;
  std::string replay_out;
  double threshold_ms = 250.0;
  double frame_period_ms = 100.0;
  replay->add_option("trace", trace_path, "Trace file (see docs for format)")
      ->required();
  replay->add_option("--out", replay_out, "Output directory");
  replay->add_option("--match-threshold-ms", threshold_ms,
                     "Startup matching threshold");
  replay->add_option("--frame-period-ms", frame_period_ms,
                     "Frame period, sets the missing-stamp timeout");

  auto* list = app.add_subcommand("list-scenarios", "List bundled scenarios");

  auto* validate =
      app.add_subcommand("validate-config", "Validate a scenario file");
  std::string validate_path;
  std::vector<std::string> validate_overrides;
  validate->add_option("config", validate_path, "Scenario JSON file")
      ->required();
  validate->add_option("--set", validate_overrides, "Dotted-path override");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed())
    return cmd_run(scenario, overrides, out_dir, check, no_artifacts);
  if (replay->parsed())
    return cmd_replay(trace_path, replay_out, threshold_ms, frame_period_ms);
  if (list->parsed()) return cmd_list();
  if (validate->parsed()) return cmd_validate(validate_path, validate_overrides);
  return kExitConfig;
}
