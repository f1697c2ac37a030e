// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#include "syncsim/scenario.hpp"

namespace syncsim {

namespace {

const char* kPaperLed = R"json({
  "name": "paper-led",
  "description": "Camera-camera alignment against a 1 kHz LED timing board: two independently triggered, exposure-compensated 10 Hz cameras with 1 ms fixed exposure, 400 frame pairs.",
  "seed": 404,
  "slave_clock": {"skew_ppm": 20.0, "offset_ms": 137.0, "quantum_us": 10.0},
  "cameras": [
    {
      "id": 0, "mode": "independent", "rate_hz": 10.0,
      "exposure": {"policy": "fixed", "value_ms": 1.0},
      "start_initialized": true, "exposure_seed_ms": 1.0
    },
    {
      "id": 1, "mode": "independent", "rate_hz": 10.0,
      "exposure": {"policy": "fixed", "value_ms": 1.0},
      "start_initialized": true, "exposure_seed_ms": 1.0
    }
  ],
  "filter": {"enabled": false},
  "experiments": {
    "led": {"pairs": 400, "board_rate_hz": 1000}
  },
  "checks": [
    {"metric": "led.pairs_checked", "op": "==", "value": 400},
    {"metric": "led.mismatched_pairs", "op": "==", "value": 0},
    {"metric": "led.wrong_increments", "op": "==", "value": 0},
    {"metric": "led.max_striding_leds", "op": "<=", "value": 2}
  ]
})json";

const char* kPaperEkf = R"json({
  "name": "paper-ekf",
  "description": "Host-time translation filter under USB-like transport jitter: 1 Hz exchanges, uniform +/-5 ms jitter on a 5 ms base latency, 20 ppm slave skew, 10 minutes.",
  "seed": 31,
  "slave_clock": {"skew_ppm": 20.0, "offset_ms": 262.1, "quantum_us": 10.0},
  "links": {
    "board_to_host": {"base_ms": 5.0, "jitter": {"kind": "uniform", "half_width_ms": 5.0}},
    "host_to_board": {"base_ms": 5.0, "jitter": {"kind": "uniform", "half_width_ms": 5.0}}
  },
  "filter": {"enabled": true, "update_period_s": 1.0, "connect_at_slave_ms": 100.0},
  "experiments": {
    "ekf": {"duration_s": 600.0, "residual_gate_ms": 5.0, "convergence_window": 30, "innovation_gate_ms": 0.2}
  },
  "checks": [
    {"metric": "ekf.converged", "op": "==", "value": 1},
    {"metric": "ekf.convergence_time_s", "op": ">=", "value": 30},
    {"metric": "ekf.convergence_time_s", "op": "<=", "value": 90},
    {"metric": "ekf.residual_within_gate_frac", "op": ">=", "value": 0.95},
    {"metric": "ekf.innovation_within_gate_frac", "op": ">=", "value": 0.95}
  ]
})json";

const char* kPaperE2e = R"json({
  "name": "paper-e2e",
  "description": "Full pipeline ground-truth study: auto-exposed stereo pair (master/slave strobe routing), a fixed-integration depth sensor, 200 Hz inertial stream, association startup handshake, host-time translation; 10 minutes.",
  "seed": 5,
  "slave_clock": {"skew_ppm": 20.0, "offset_ms": 417.3, "quantum_us": 10.0},
  "cameras": [
    {
      "id": 0, "mode": "master", "rate_hz": 10.0,
      "exposure": {"policy": "auto", "value_ms": 4.0, "min_ms": 1.0, "max_ms": 10.0, "step_frac": 0.2}
    },
    {
      "id": 1, "mode": "strobe_slave", "master": 0, "rate_hz": 10.0,
      "exposure": {"policy": "auto", "value_ms": 4.0, "min_ms": 1.0, "max_ms": 10.0}
    },
    {
      "id": 2, "mode": "fixed_exposure", "rate_hz": 5.0,
      "exposure": {"policy": "fixed", "value_ms": 2.0}
    }
  ],
  "imu": {"enabled": true, "rate_hz": 200},
  "links": {
    "board_to_host": {"base_ms": 5.0, "jitter": {"kind": "uniform", "half_width_ms": 5.0}},
    "host_to_board": {"base_ms": 5.0, "jitter": {"kind": "uniform", "half_width_ms": 5.0}},
    "camera_to_host": {"base_ms": 12.0, "jitter": {"kind": "uniform", "half_width_ms": 3.0}}
  },
  "filter": {"enabled": true, "update_period_s": 1.0, "connect_at_slave_ms": 100.0},
  "experiments": {
    "sync_study": {"duration_s": 600.0, "settle_margin_s": 120.0}
  },
  "checks": [
    {"metric": "study.all_cameras_initialized", "op": "==", "value": 1},
    {"metric": "study.converged", "op": "==", "value": 1},
    {"metric": "study.window_samples", "op": ">=", "value": 10000},
    {"metric": "study.max_abs_error_ms", "op": "<", "value": 1.0},
    {"metric": "study.incorrect_pairings", "op": "==", "value": 0}
  ]
})json";

const char* kAssocStress = R"json({
  "name": "assoc-stress",
  "description": "Randomized association robustness sweep: startup sequence offsets, message drops, and arrival jitter over many short runs; every emitted pairing must be provably correct.",
  "seed": 9000,
  "slave_clock": {"skew_ppm": 20.0, "offset_ms": 87.0, "quantum_us": 10.0},
  "experiments": {
    "assoc_stress": {"runs": 1000, "frames": 30, "offset_range": 10,
                     "stamp_drop_prob": 0.03, "image_drop_prob": 0.03}
  },
  "checks": [
    {"metric": "stress.incorrect_pairings", "op": "==", "value": 0},
    {"metric": "stress.offset_recovery_failures", "op": "==", "value": 0},
    {"metric": "stress.runs_completed", "op": "==", "value": 1000}
  ]
})json";

}  // namespace

const std::map<std::string, std::string>& builtin_scenarios() {
  static const std::map<std::string, std::string> scenarios = {
      {"paper-led", kPaperLed},
      {"paper-ekf", kPaperEkf},
      {"paper-e2e", kPaperE2e},
      {"assoc-stress", kAssocStress},
  };
  return scenarios;
}

}  // namespace syncsim
