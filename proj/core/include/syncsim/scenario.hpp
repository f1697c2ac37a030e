// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "syncsim/camera.hpp"
#include "syncsim/clock.hpp"
#include "syncsim/clock_filter.hpp"
#include "syncsim/synchronizer.hpp"
#include "syncsim/trigger_board.hpp"

namespace syncsim {

struct CameraScenario {
  CameraChannelConfig channel;
  CameraDeviceConfig device;
  SimTime trigger_line_delay{};
  SimTime strobe_line_delay{};
};

struct LinkScenario {
  SimTime base_latency{};
  JitterModel jitter{};
  double drop_prob{0.0};
};

struct FilterScenario {
  bool enabled{true};
  SimTime update_period{sim_s(1)};
  SimTime connect_at_slave{sim_ms(100)};
  FilterNoise noise{FilterNoise::defaults()};
  FilterInit init{FilterInit::defaults()};
};

struct LedExperimentScenario {
  bool enabled{false};
  int pairs{400};
  int64_t board_rate_hz{1000};
  double dwell_threshold_frac{0.01};
};

struct EkfExperimentScenario {
  bool enabled{false};
  SimTime duration{sim_s(600)};
  SimTime residual_gate{sim_ms(5)};
  int convergence_window{30};
  SimTime innovation_gate{sim_us(200)};
  SimTime no_filter_horizon{sim_s(3600)};
};

struct SyncStudyScenario {
  bool enabled{false};
  SimTime duration{sim_s(600)};
  SimTime settle_margin{sim_s(30)};
};

struct AssocStressScenario {
  bool enabled{false};
  int runs{1000};
  int frames{30};
  int offset_range{10};
  double stamp_drop_prob{0.03};
  double image_drop_prob{0.03};
};

struct CheckSpec {
  std::string metric;
  std::string op;  // == != <= >= < >
  double value{0.0};
};

struct ScenarioConfig {
  std::string name{"scenario"};
  std::string description;
  uint64_t seed{1};
  ClockModel host_clock{0, {}, sim_us(1)};
  ClockModel slave_clock{0, {}, sim_us(10)};
  SimTime board_start_slave{sim_ms(500)};
  std::vector<CameraScenario> cameras;
  bool imu_enabled{false};
  int64_t imu_rate_hz{200};
  LinkScenario board_to_host;
  LinkScenario host_to_board;
  LinkScenario camera_to_host;
  FilterScenario filter;
  SyncConfig sync;
  LedExperimentScenario led;
  EkfExperimentScenario ekf;
  SyncStudyScenario study;
  AssocStressScenario stress;
  std::vector<CheckSpec> checks;
  bool write_message_trace{false};
  bool write_edge_trace{false};
};

// Parses and validates. On any problem returns std::nullopt and fills
// `errors` with one "path: message" entry per offending field.
std::optional<ScenarioConfig> scenario_from_json(
    const nlohmann::json& j, std::vector<std::string>* errors);

// Effective configuration, defaults applied, canonical key order.
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);

// FNV-1a of the canonical dump, as fixed-width hex.
std::string config_hash(const ScenarioConfig& cfg);

// Applies one dotted-path override ("cameras.1.trigger_line_delay_us=700")
// onto raw JSON. Throws ConfigError on bad paths or values.
void apply_override(nlohmann::json& j, const std::string& assignment);

// Bundled scenario texts. Keys are the names accepted by the CLI.
const std::map<std::string, std::string>& builtin_scenarios();

// Loads a scenario by builtin name or file path, applying overrides.
// Throws ConfigError with the collected messages on validation failure.
ScenarioConfig load_scenario(const std::string& name_or_path,
                             const std::vector<std::string>& overrides);

}  // namespace syncsim
