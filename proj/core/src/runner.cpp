// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#include "syncsim/runner.hpp"

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "syncsim/csv.hpp"
#include "syncsim/errors.hpp"
#include "syncsim/experiments.hpp"
#include "syncsim/trace.hpp"

namespace syncsim {

using nlohmann::json;

bool evaluate_check(const CheckSpec& spec, double actual) {
  if (spec.op == "==") return actual == spec.value;
  if (spec.op == "!=") return actual != spec.value;
  if (spec.op == "<=") return actual <= spec.value;
  if (spec.op == ">=") return actual >= spec.value;
  if (spec.op == "<") return actual < spec.value;
  if (spec.op == ">") return actual > spec.value;
  return false;
}

RunOutcome run_scenario(const ScenarioConfig& cfg, const std::string& out_dir) {
  RunOutcome outcome;
  outcome.out_dir = out_dir;
  const std::string hash = config_hash(cfg);
  const std::string provenance =
      "config_hash=" + hash + " seed=" + std::to_string(cfg.seed);
  ArtifactSink sink(out_dir, provenance);

  std::vector<ExperimentReport> reports;
  if (cfg.led.enabled) reports.push_back(run_led_experiment(cfg, sink));
  if (cfg.ekf.enabled) reports.push_back(run_ekf_experiment(cfg, sink));
  if (cfg.study.enabled) reports.push_back(run_sync_study(cfg, sink));
  if (cfg.stress.enabled) reports.push_back(run_assoc_stress(cfg, sink));

  for (const auto& rep : reports) {
    for (const auto& [key, value] : rep.metrics) {
      outcome.metrics[rep.name + "." + key] = value;
    }
  }

  for (const auto& spec : cfg.checks) {
    CheckResult res;
    res.spec = spec;
    auto it = outcome.metrics.find(spec.metric);
    res.found = it != outcome.metrics.end();
    res.actual = res.found ? it->second : 0.0;
    res.pass = res.found && evaluate_check(spec, res.actual);
    if (!res.pass) outcome.all_checks_passed = false;
    outcome.checks.push_back(res);
  }

  if (sink.enabled()) {
    {
      std::ofstream scenario_out(out_dir + "/scenario.json",
                                 std::ios::binary);
      scenario_out << scenario_to_json(cfg).dump(2) << '\n';
    }
    json summary;
    summary["name"] = cfg.name;
    summary["config_hash"] = hash;
    summary["seed"] = cfg.seed;
    json metrics = json::object();
    for (const auto& [key, value] : outcome.metrics) metrics[key] = value;
    summary["metrics"] = metrics;
    json checks = json::array();
    for (const auto& c : outcome.checks) {
      checks.push_back(json{{"metric", c.spec.metric},
                            {"op", c.spec.op},
                            {"value", c.spec.value},
                            {"actual", c.actual},
                            {"found", c.found},
                            {"pass", c.pass}});
    }
    summary["checks"] = checks;
    summary["all_checks_passed"] = outcome.all_checks_passed;
    std::ofstream summary_out(out_dir + "/summary.json", std::ios::binary);
    summary_out << summary.dump(2) << '\n';
    if (!summary_out) throw SimError("failed writing " + out_dir);
  }
  return outcome;
}

ReplayOutcome replay_trace(std::istream& trace, const SyncConfig& sync_cfg,
                           const std::string& out_dir) {
  SyncConfig cfg = sync_cfg;
  cfg.translate_output = false;  // traces carry no filter state
  Synchronizer sync(cfg);
  ReplayOutcome out;
  sync.stamped_out = [&](const StampedImage& s) { out.stamped.push_back(s); };
  sync.imu_out = [&](const ImuRecord& r) { out.imu.push_back(r); };

  std::string line;
  size_t line_no = 0;
  SimTime last{INT64_MIN};
  while (std::getline(trace, line)) {
    ++line_no;
    TraceRecord rec;
    if (!parse_trace_line(line, line_no, &rec)) continue;
    last = std::max(last, rec.arrival);
    switch (rec.stream) {
      case TraceRecord::Stream::image:
        sync.on_image(ImageMsg{rec.camera_id, rec.seq, rec.payload},
                      rec.arrival);
        break;
      case TraceRecord::Stream::stamp:
        sync.on_stamp(TimestampMsg{rec.camera_id, rec.seq, rec.stamp},
                      rec.arrival);
        break;
      case TraceRecord::Stream::imu:
        sync.on_imu(ImuSampleMsg{rec.seq, rec.stamp, rec.payload}, rec.arrival);
        break;
    }
  }
  if (last.nanos != INT64_MIN) sync.finalize(last);
  out.diagnostics = sync.diagnostics;

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    CsvWriter stamped(out_dir + "/stamped.csv",
                      {"camera", "image_seq", "board_seq", "payload",
                       "t_image_ns"},
                      "");
    for (const auto& s : out.stamped) {
      stamped.row({s.camera_id, int64_t(s.image_seq), int64_t(s.board_seq),
                   s.payload_id, s.t_image.nanos});
    }
    stamped.close();
    CsvWriter imu(out_dir + "/imu.csv", {"seq", "t_ns", "sample_id"}, "");
    for (const auto& r : out.imu) {
      imu.row({int64_t(r.seq), r.t.nanos, r.sample_id});
    }
    imu.close();
    CsvWriter diags(out_dir + "/diagnostics.csv",
                    {"kind", "camera", "a", "b", "at_ns"}, "");
    for (const auto& d : out.diagnostics) {
      diags.row({to_string(d.kind), d.camera, d.a, d.b, d.at.nanos});
    }
    diags.close();
  }
  return out;
}

}  // namespace syncsim
