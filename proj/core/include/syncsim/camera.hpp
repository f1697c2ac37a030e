// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>

#include "syncsim/messages.hpp"
#include "syncsim/rng.hpp"
#include "syncsim/scheduler.hpp"
#include "syncsim/time.hpp"

namespace syncsim {

// How a camera picks the exposure time of each frame. auto_walk models
// scene-driven auto-exposure as a bounded random walk: each frame steps by at
// most step_frac of the current value and stays inside [e_min, e_max].
struct ExposurePolicy {
  enum class Kind { fixed, auto_walk };
  Kind kind{Kind::fixed};
  SimTime value{sim_ms(5)};  // fixed value, also the walk's starting point
  SimTime e_min{sim_ms(1)};
  SimTime e_max{sim_ms(10)};
  double step_frac{0.2};
};

struct CameraDeviceConfig {
  int id{0};
  ExposurePolicy exposure{};
  bool emits_strobe{true};       // false for strobe-less fixed-integration sensors
  SimTime readout_delay{sim_ms(2)};  // exposure end -> image message send
  // Startup misalignment knobs. spurious_startup_frames emits stale buffered
  // frames (numbered, no exposure) at start; drop_first_images swallows the
  // first N real frames before the driver starts numbering and delivering.
  int spurious_startup_frames{0};
  SimTime spurious_interval{sim_ms(50)};
  int drop_first_images{0};
};

// A triggered camera. On a trigger pulse it exposes for a policy-chosen
// duration, raises its strobe line for exactly the exposure window, and sends
// an image message after readout. In follower mode the exposure window is
// driven edge-for-edge by an external strobe instead of the policy.
class SimCamera {
 public:
  SimCamera(Simulator& sim, DeviceId device, CameraDeviceConfig cfg,
            uint64_t seed);

  // Emit any spurious startup frames and arm the device.
  void start();

  // Trigger input (already includes any trigger-line delay).
  void on_trigger(SimTime t_true);

  // Follower input: mirror an external exposure window.
  void on_external_exposure(bool rising, SimTime t_true);

  // Edge output, called at the true edge instant from within the edge event.
  std::function<void(bool rising, SimTime t_true)> strobe_out;
  std::function<void(const ImageMsg&)> image_out;

  // Ground-truth hooks for the harness.
  std::function<void(int camera, uint64_t payload, SimTime t_start)>
      exposure_start_truth;
  std::function<void(int camera, uint64_t payload, SimTime t_start,
                     SimTime t_end)>
      exposure_end_truth;
  std::function<void(int camera, uint64_t payload)> spurious_truth;

  bool exposing() const { return exposing_; }
  uint64_t overlapped_triggers() const { return overlapped_triggers_; }
  int id() const { return cfg_.id; }

 private:
  void begin_exposure(SimTime t_true, SimTime duration);
  void end_exposure(SimTime t_true);
  void send_image(uint64_t payload);
  SimTime next_exposure_duration();
  uint64_t make_payload();

  Simulator& sim_;
  DeviceId device_;
  CameraDeviceConfig cfg_;
  Rng rng_;
  SimTime walk_value_{};
  bool exposing_{false};
  SimTime exposure_started_{};
  uint64_t current_payload_{0};
  uint32_t next_image_seq_{0};
  uint32_t frame_counter_{0};
  int drop_remaining_{0};
  uint64_t overlapped_triggers_{0};
};

}  // namespace syncsim
