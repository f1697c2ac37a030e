// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "syncsim/clock.hpp"
#include "syncsim/clock_filter.hpp"
#include "syncsim/messages.hpp"
#include "syncsim/scheduler.hpp"
#include "syncsim/time.hpp"

namespace syncsim {

enum class CameraMode { independent, master, strobe_slave, fixed_exposure };

struct CameraChannelConfig {
  int id{0};
  CameraMode mode{CameraMode::independent};
  int master_channel{-1};     // strobe_slave: channel whose strobe triggers us
  SimTime period{sim_ms(100)};       // full-rate frame period on the slave clock
  SimTime fixed_exposure{};          // fixed_exposure mode: the known e
  SimTime exposure_seed{};           // first compensation estimate when no
                                     // strobe has been measured yet (0 = none)
  SimTime slow_period{sim_s(1)};
  bool compensation{true};           // false: trigger directly on the grid
  bool start_initialized{false};     // skip the slow handshake phase
};

// Throws ConfigError unless master/slave modes line up.
void validate_master_slave(const CameraChannelConfig& master,
                           const CameraChannelConfig& slave);

struct TriggerPlan {
  SimTime trigger_slave;
  bool clamped{false};
};

// Trigger instant for a frame whose mid-exposure should land on `next_mid`:
// half the previous exposure early, floor-quantized to the timer resolution.
// An exposure estimate at or beyond the period cannot be compensated; the
// plan clamps to half the period and flags it.
TriggerPlan compute_trigger_time(SimTime next_mid, SimTime last_exposure,
                                 SimTime period, SimTime quantum);

struct BoardConfig {
  ClockModel clock;                        // the slave (board) clock
  std::vector<CameraChannelConfig> cameras;
  bool imu_enabled{false};
  int64_t imu_rate_hz{200};
  SimTime start_at_slave{sim_ms(500)};     // first trigger activity
  bool filter_enabled{true};
  SimTime connect_at_slave{sim_ms(100)};   // initial host-time exchange
  SimTime filter_update_period{sim_s(1)};
  FilterNoise noise{FilterNoise::defaults()};
  FilterInit filter_init{FilterInit::defaults()};
};

// Everything known about a timestamp message at emission time, for logs and
// ground-truth checks. `grid` is the mid-exposure target the firmware was
// aiming at; in slow mode it equals the stamp.
struct StampInfo {
  int camera_id{0};
  uint32_t seq{0};
  SimTime stamp{};
  SimTime grid{};
  SimTime exposure{};       // measured (or fixed) e of this frame, 0 if unknown
  SimTime prev_exposure{};  // e the trigger computation used
  bool slow{false};
  bool clamped{false};
};

// The firmware model. Runs camera triggering with exposure compensation,
// the slow association-startup mode, fixed-exposure channels, periodic
// inertial sampling, and the host-time filter, all on the slave clock.
class TriggerBoard {
 public:
  TriggerBoard(Simulator& sim, DeviceId device, BoardConfig cfg);

  void start();

  // Strobe edge from a camera, at the (possibly line-delayed) true instant.
  // Throws ProtocolViolationError on two same-polarity edges in a row.
  void on_exposure_edge(int channel_id, bool rising, SimTime t_true);

  // Host finished association startup for this camera.
  void on_init_confirm(int channel_id);

  void on_time_answer(const TimeAnswer& answer, SimTime t_true_arrival);

  const FilterState* filter_state() const {
    return filter_ ? &*filter_ : nullptr;
  }

  // Wiring, set before start().
  std::function<void(int channel_id, SimTime t_true)> trigger_out;
  std::function<void(const TimestampMsg&, const StampInfo&)> stamp_out;
  std::function<void(const ImuSampleMsg&, SimTime tick_slave)> imu_out;
  std::function<void(const TimeRequest&)> time_request_out;
  std::function<void(const FilterUpdate&, const TimeRequestSample&)>
      filter_update_out;
  std::function<void(const FilterState&, const TimeRequestSample&)>
      filter_init_out;

  // Introspection.
  bool channel_in_slow_mode(int channel_id) const;
  uint32_t channel_seq(int channel_id) const;
  SimTime exposure_estimate(int channel_id) const;
  uint64_t clamp_count(int channel_id) const;
  const ClockModel& clock() const { return cfg_.clock; }

 private:
  struct Channel {
    CameraChannelConfig cfg;
    bool slow{true};
    bool confirmed{false};
    bool inflight_slow{false};
    uint32_t seq{0};
    SimTime next_mid{};
    SimTime next_slow{};
    SimTime last_exposure{};
    bool have_exposure{false};
    bool strobe_high{false};
    SimTime rise_slave{};
    SimTime pending_grid{};
    SimTime pending_prev_e{};
    bool pending_clamped{false};
    Simulator::Handle trigger_event{};
    uint64_t clamp_count{0};
  };

  Channel& channel(int id);
  const Channel& channel(int id) const;
  SimTime slave_now() const;
  void schedule_slow_trigger(Channel& ch);
  void fire_slow_trigger(Channel& ch);
  void schedule_normal_trigger(Channel& ch);
  void fire_fixed_exposure(Channel& ch);
  void activate_full_rate(Channel& ch);
  void emit_stamp(Channel& ch, SimTime stamp, SimTime exposure, bool slow);
  void schedule_imu_tick(int64_t k);
  void schedule_time_request(SimTime at_slave);

  Simulator& sim_;
  DeviceId device_;
  BoardConfig cfg_;
  std::vector<Channel> channels_;
  uint32_t imu_seq_{0};
  std::optional<FilterState> filter_;
  uint32_t request_id_{0};
  SimTime pending_request_slave_{};
};

// Slave-clock instant of inertial tick k on a rate_hz grid anchored at the
// clock epoch, floor-quantized to the timer resolution.
SimTime imu_tick_slave_time(int64_t k, int64_t rate_hz, SimTime quantum);

}  // namespace syncsim
