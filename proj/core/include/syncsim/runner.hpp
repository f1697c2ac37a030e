// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "syncsim/scenario.hpp"
#include "syncsim/synchronizer.hpp"

namespace syncsim {

struct CheckResult {
  CheckSpec spec;
  double actual{0.0};
  bool found{false};
  bool pass{false};
};

struct RunOutcome {
  std::map<std::string, double> metrics;  // "experiment.metric" -> value
  std::vector<CheckResult> checks;
  bool all_checks_passed{true};
  std::string out_dir;  // empty when artifacts were disabled
};

// Runs every experiment the scenario enables, writes CSV artifacts plus
// summary.json and scenario.json under out_dir (skipped when empty), and
// evaluates the scenario's checks. Deterministic: the same (config, seed)
// produces byte-identical artifacts.
RunOutcome run_scenario(const ScenarioConfig& cfg, const std::string& out_dir);

bool evaluate_check(const CheckSpec& spec, double actual);

struct ReplayOutcome {
  std::vector<StampedImage> stamped;
  std::vector<ImuRecord> imu;
  std::vector<Diagnostic> diagnostics;
};

// Feeds a recorded message trace through the association logic, offline.
// Output timestamps stay on the board timeline (no filter state exists in a
// trace). Writes stamped.csv and diagnostics.csv when out_dir is non-empty.
ReplayOutcome replay_trace(std::istream& trace, const SyncConfig& sync_cfg,
                           const std::string& out_dir);

}  // namespace syncsim
