// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <string>

#include "syncsim/csv.hpp"
#include "syncsim/scenario.hpp"

namespace syncsim {

// Every experiment reduces to a named metric map; all values are exactly
// representable as doubles (counts, nanosecond totals, fractions), so the
// map is also the deterministic of record for --check.
struct ExperimentReport {
  std::string name;
  std::map<std::string, double> metrics;
};

// Creates per-experiment CSVs under one output directory, stamping each file
// with the scenario's config hash and seed. A null directory means "compute
// only, write nothing".
class ArtifactSink {
 public:
  ArtifactSink() = default;  // disabled sink
  ArtifactSink(std::string dir, std::string provenance);
  bool enabled() const { return !dir_.empty(); }
  std::unique_ptr<CsvWriter> csv(const std::string& name,
                                 const std::vector<std::string>& columns) const;
  const std::string& dir() const { return dir_; }
  const std::string& provenance() const { return provenance_; }

 private:
  std::string dir_;
  std::string provenance_;
};

// Camera-camera alignment against the striding/binary LED timing board.
ExperimentReport run_led_experiment(const ScenarioConfig& cfg,
                                    const ArtifactSink& sink);

// Host-time translation filter behavior: residual/innovation series,
// convergence detection, and the unfiltered-drift comparison.
ExperimentReport run_ekf_experiment(const ScenarioConfig& cfg,
                                    const ArtifactSink& sink);

// Full-pipeline ground-truth timestamp accuracy study, including the
// exposure-compensation regularity bounds.
ExperimentReport run_sync_study(const ScenarioConfig& cfg,
                                const ArtifactSink& sink);

// Randomized association robustness sweep.
ExperimentReport run_assoc_stress(const ScenarioConfig& cfg,
                                  const ArtifactSink& sink);

}  // namespace syncsim
