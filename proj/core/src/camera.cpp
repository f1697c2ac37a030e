// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#include "syncsim/camera.hpp"

#include <algorithm>

namespace syncsim {

SimCamera::SimCamera(Simulator& sim, DeviceId device, CameraDeviceConfig cfg,
                     uint64_t seed)
    : sim_(sim),
      device_(device),
      cfg_(cfg),
      rng_(seed),
      walk_value_(cfg.exposure.value),
      drop_remaining_(cfg.drop_first_images) {}

uint64_t SimCamera::make_payload() {
  return (uint64_t(uint32_t(cfg_.id)) << 32) | uint64_t(frame_counter_++);
}

void SimCamera::start() {
  // Stale frames flushed out of the driver queue before the first trigger.
  SimTime at = sim_.now();
  for (int i = 0; i < cfg_.spurious_startup_frames; ++i) {
    uint64_t payload = make_payload();
    if (spurious_truth) spurious_truth(cfg_.id, payload);
    sim_.schedule(at, device_, EventKind::message_arrival, payload,
                  [this, payload] { send_image(payload); });
    at += cfg_.spurious_interval;
  }
}

SimTime SimCamera::next_exposure_duration() {
  const ExposurePolicy& p = cfg_.exposure;
  if (p.kind == ExposurePolicy::Kind::fixed) return p.value;
  int64_t max_step = int64_t(double(walk_value_.nanos) * p.step_frac);
  if (max_step > 0) {
    walk_value_.nanos += rng_.uniform_i64(-max_step, max_step);
  }
  walk_value_.nanos = std::clamp(walk_value_.nanos, p.e_min.nanos, p.e_max.nanos);
  return walk_value_;
}

void SimCamera::on_trigger(SimTime t_true) {
  if (exposing_) {
    ++overlapped_triggers_;
    return;
  }
  begin_exposure(t_true, next_exposure_duration());
}

void SimCamera::begin_exposure(SimTime t_true, SimTime duration) {
  exposing_ = true;
  exposure_started_ = t_true;
  current_payload_ = make_payload();
  if (exposure_start_truth)
    exposure_start_truth(cfg_.id, current_payload_, t_true);
  if (cfg_.emits_strobe && strobe_out) strobe_out(true, t_true);
  if (duration.nanos > 0) {
    sim_.schedule(t_true + duration, device_, EventKind::exposure_end,
                  current_payload_, [this] { end_exposure(sim_.now()); });
  } else {
    end_exposure(t_true);
  }
}

void SimCamera::on_external_exposure(bool rising, SimTime t_true) {
  if (rising) {
    if (exposing_) {
      ++overlapped_triggers_;
      return;
    }
    exposing_ = true;
    exposure_started_ = t_true;
    current_payload_ = make_payload();
    if (exposure_start_truth)
      exposure_start_truth(cfg_.id, current_payload_, t_true);
    if (cfg_.emits_strobe && strobe_out) strobe_out(true, t_true);
  } else {
    if (!exposing_) return;
    end_exposure(t_true);
  }
}

void SimCamera::end_exposure(SimTime t_true) {
  exposing_ = false;
  if (exposure_end_truth)
    exposure_end_truth(cfg_.id, current_payload_, exposure_started_, t_true);
  if (cfg_.emits_strobe && strobe_out) strobe_out(false, t_true);
  uint64_t payload = current_payload_;
  sim_.schedule(t_true + cfg_.readout_delay, device_,
                EventKind::message_arrival, payload,
                [this, payload] { send_image(payload); });
}

void SimCamera::send_image(uint64_t payload) {
  if (drop_remaining_ > 0) {
    --drop_remaining_;
    return;
  }
  if (image_out)
    image_out(ImageMsg{cfg_.id, next_image_seq_++, payload});
}

}  // namespace syncsim
