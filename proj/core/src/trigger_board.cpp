// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#include "syncsim/trigger_board.hpp"

#include <string>
#include <utility>

#include "syncsim/errors.hpp"

namespace syncsim {

void validate_master_slave(const CameraChannelConfig& master,
                           const CameraChannelConfig& slave) {
  if (master.mode != CameraMode::master) {
    throw ConfigError("channel " + std::to_string(master.id) +
                      " is routed as a master but not in master mode");
  }
  if (slave.mode != CameraMode::strobe_slave) {
    throw ConfigError("channel " + std::to_string(slave.id) +
                      " is routed as a slave but not in strobe_slave mode");
  }
  if (slave.master_channel != master.id) {
    throw ConfigError("channel " + std::to_string(slave.id) +
                      " names master " + std::to_string(slave.master_channel) +
                      " but is wired to " + std::to_string(master.id));
  }
}

TriggerPlan compute_trigger_time(SimTime next_mid, SimTime last_exposure,
                                 SimTime period, SimTime quantum) {
  SimTime half{floor_div(last_exposure.nanos, 2)};
  bool clamped = false;
  if (last_exposure >= period) {
    half = SimTime{floor_div(period.nanos, 2)};
    clamped = true;
  }
  return TriggerPlan{quantize_floor(next_mid - half, quantum), clamped};
}

SimTime imu_tick_slave_time(int64_t k, int64_t rate_hz, SimTime quantum) {
  SimTime raw{floor_div(k * 1'000'000'000, rate_hz)};
  return quantize_floor(raw, quantum);
}

TriggerBoard::TriggerBoard(Simulator& sim, DeviceId device, BoardConfig cfg)
    : sim_(sim), device_(device), cfg_(std::move(cfg)) {
  channels_.reserve(cfg_.cameras.size());
  for (const auto& cc : cfg_.cameras) {
    Channel ch;
    ch.cfg = cc;
    ch.slow = !cc.start_initialized;
    ch.confirmed = cc.start_initialized;
    if (cc.mode == CameraMode::fixed_exposure) {
      ch.last_exposure = cc.fixed_exposure;
      ch.have_exposure = true;
    } else if (cc.exposure_seed.nanos > 0) {
      ch.last_exposure = cc.exposure_seed;
      ch.have_exposure = true;
    }
    if (cc.mode == CameraMode::strobe_slave) {
      ch.slow = false;  // cadence is the master's; stamping follows frame tags
    }
    channels_.push_back(ch);
  }
  for (const auto& cc : cfg_.cameras) {
    if (cc.mode == CameraMode::strobe_slave) {
      validate_master_slave(channel(cc.master_channel).cfg, cc);
    }
  }
}

TriggerBoard::Channel& TriggerBoard::channel(int id) {
  for (auto& ch : channels_)
    if (ch.cfg.id == id) return ch;
  throw ConfigError("unknown camera channel " + std::to_string(id));
}

const TriggerBoard::Channel& TriggerBoard::channel(int id) const {
  for (const auto& ch : channels_)
    if (ch.cfg.id == id) return ch;
  throw ConfigError("unknown camera channel " + std::to_string(id));
}

SimTime TriggerBoard::slave_now() const {
  return cfg_.clock.local_time(sim_.now());
}

void TriggerBoard::start() {
  // Config delays are elapsed slave time since boot; the slave clock may
  // already read an arbitrary offset when the board comes up.
  const SimTime boot = slave_now();
  const SimTime first_activity = boot + cfg_.start_at_slave;
  for (auto& ch : channels_) {
    if (ch.cfg.mode == CameraMode::strobe_slave) continue;
    if (ch.slow) {
      ch.next_slow = quantize_ceil(first_activity, ch.cfg.slow_period);
      schedule_slow_trigger(ch);
    } else {
      ch.next_mid =
          quantize_ceil(first_activity + ch.cfg.period, ch.cfg.period);
      schedule_normal_trigger(ch);
    }
  }
  if (cfg_.imu_enabled) {
    int64_t k = 0;
    while (imu_tick_slave_time(k, cfg_.imu_rate_hz, cfg_.clock.tick_quantum) <
           first_activity)
      ++k;
    schedule_imu_tick(k);
  }
  if (cfg_.filter_enabled) {
    schedule_time_request(boot + cfg_.connect_at_slave);
  }
}

void TriggerBoard::schedule_slow_trigger(Channel& ch) {
  SimTime t_true = cfg_.clock.true_time_of_local(ch.next_slow);
  int id = ch.cfg.id;
  ch.trigger_event =
      sim_.schedule(t_true, device_, EventKind::trigger_pulse, uint64_t(id),
                    [this, id] { fire_slow_trigger(channel(id)); });
}

void TriggerBoard::fire_slow_trigger(Channel& ch) {
  if (!ch.slow) return;  // switched to full rate in the same instant
  SimTime stamp = ch.next_slow;
  ch.next_slow += ch.cfg.slow_period;
  ch.inflight_slow = true;
  ch.pending_grid = stamp;
  ch.pending_prev_e = SimTime{};
  ch.pending_clamped = false;
  // Pulse first so the camera's exposure is underway before the timestamp
  // message leaves the board; slow frames are stamped at the trigger itself.
  if (trigger_out) trigger_out(ch.cfg.id, sim_.now());
  emit_stamp(ch, stamp, SimTime{}, true);
  schedule_slow_trigger(ch);
}

void TriggerBoard::schedule_normal_trigger(Channel& ch) {
  SimTime prev_e = ch.have_exposure ? ch.last_exposure : SimTime{};
  TriggerPlan plan{quantize_floor(ch.next_mid, cfg_.clock.tick_quantum), false};
  if (ch.cfg.compensation) {
    plan = compute_trigger_time(ch.next_mid, prev_e, ch.cfg.period,
                                cfg_.clock.tick_quantum);
  }
  if (plan.clamped) ++ch.clamp_count;
  SimTime t_true = cfg_.clock.true_time_of_local(plan.trigger_slave);
  int id = ch.cfg.id;
  bool clamped = plan.clamped;
  SimTime grid = ch.next_mid;
  ch.trigger_event = sim_.schedule(
      t_true, device_, EventKind::trigger_pulse, uint64_t(id),
      [this, id, clamped, grid, prev_e] {
        Channel& c = channel(id);
        c.inflight_slow = false;
        c.pending_grid = grid;
        c.pending_prev_e = prev_e;
        c.pending_clamped = clamped;
        c.next_mid += c.cfg.period;
        if (trigger_out) trigger_out(id, sim_.now());
        if (c.cfg.mode == CameraMode::fixed_exposure) {
          fire_fixed_exposure(c);
        }
      });
}

void TriggerBoard::fire_fixed_exposure(Channel& ch) {
  // Strobe-less sensor: the stamp is computed from the known integration
  // time and emitted when the integration window closes.
  SimTime e = ch.cfg.fixed_exposure;
  SimTime stamp = slave_now() + SimTime{floor_div(e.nanos, 2)};
  int id = ch.cfg.id;
  sim_.schedule(sim_.now() + e, device_, EventKind::exposure_end, uint64_t(id),
                [this, id, stamp, e] {
                  Channel& c = channel(id);
                  emit_stamp(c, stamp, e, false);
                });
  schedule_normal_trigger(ch);
}

void TriggerBoard::on_exposure_edge(int channel_id, bool rising,
                                    SimTime t_true) {
  Channel& ch = channel(channel_id);
  if (ch.cfg.mode == CameraMode::fixed_exposure) {
    throw ProtocolViolationError("strobe edge on a strobe-less channel " +
                                 std::to_string(channel_id));
  }
  SimTime reading = cfg_.clock.local_time(t_true);
  if (rising) {
    if (ch.strobe_high) {
      throw ProtocolViolationError("two rising strobe edges on channel " +
                                   std::to_string(channel_id));
    }
    ch.strobe_high = true;
    ch.rise_slave = reading;
    if (ch.cfg.mode == CameraMode::strobe_slave && ch.cfg.master_channel >= 0) {
      // The frame rides the master's schedule; mirror its tags.
      const Channel& m = channel(ch.cfg.master_channel);
      ch.inflight_slow = m.inflight_slow;
      ch.pending_grid = m.inflight_slow ? reading : m.pending_grid;
      ch.pending_prev_e = m.pending_prev_e;
      ch.pending_clamped = m.pending_clamped;
      if (ch.inflight_slow) {
        // Slow frames stamp at the trigger; for a strobe-driven channel the
        // trigger is this edge.
        emit_stamp(ch, reading, SimTime{}, true);
      }
    }
    return;
  }
  if (!ch.strobe_high) {
    throw ProtocolViolationError("falling strobe edge without exposure on " +
                                 std::to_string(channel_id));
  }
  ch.strobe_high = false;
  SimTime e = reading - ch.rise_slave;
  SimTime stamp = ch.rise_slave + SimTime{floor_div(e.nanos, 2)};
  ch.last_exposure = e;
  ch.have_exposure = true;
  if (ch.inflight_slow) {
    // Already stamped at the trigger; the edge only feeds the exposure
    // estimate used by the first compensated frame.
    return;
  }
  emit_stamp(ch, stamp, e, false);
  if (ch.cfg.mode != CameraMode::strobe_slave) schedule_normal_trigger(ch);
}

void TriggerBoard::emit_stamp(Channel& ch, SimTime stamp, SimTime exposure,
                              bool slow) {
  TimestampMsg msg{ch.cfg.id, ch.seq, stamp};
  StampInfo info;
  info.camera_id = ch.cfg.id;
  info.seq = ch.seq;
  info.stamp = stamp;
  info.grid = ch.pending_grid;
  info.exposure = exposure;
  info.prev_exposure = ch.pending_prev_e;
  info.slow = slow;
  info.clamped = ch.pending_clamped;
  ++ch.seq;
  if (stamp_out) stamp_out(msg, info);
}

void TriggerBoard::activate_full_rate(Channel& ch) {
  ch.slow = false;
  sim_.cancel(ch.trigger_event);
  // Anchor full-rate mid-exposure targets on the period grid, one clear
  // period out so the trigger (half an exposure earlier) is in the future.
  ch.next_mid = quantize_ceil(slave_now() + ch.cfg.period, ch.cfg.period);
  schedule_normal_trigger(ch);
}

void TriggerBoard::on_init_confirm(int channel_id) {
  Channel& ch = channel(channel_id);
  if (ch.confirmed) return;
  ch.confirmed = true;
  if (ch.cfg.mode == CameraMode::independent ||
      ch.cfg.mode == CameraMode::fixed_exposure) {
    if (ch.slow) activate_full_rate(ch);
    return;
  }
  // A master/slave pair switches together once both cameras are confirmed.
  Channel* master = nullptr;
  Channel* slave = nullptr;
  if (ch.cfg.mode == CameraMode::master) {
    master = &ch;
    for (auto& other : channels_) {
      if (other.cfg.mode == CameraMode::strobe_slave &&
          other.cfg.master_channel == ch.cfg.id)
        slave = &other;
    }
  } else {
    slave = &ch;
    master = &channel(ch.cfg.master_channel);
  }
  if (master && slave && master->confirmed && slave->confirmed &&
      master->slow) {
    activate_full_rate(*master);
  }
}

void TriggerBoard::schedule_imu_tick(int64_t k) {
  SimTime tick_slave =
      imu_tick_slave_time(k, cfg_.imu_rate_hz, cfg_.clock.tick_quantum);
  SimTime t_true = cfg_.clock.true_time_of_local(tick_slave);
  sim_.schedule(t_true, device_, EventKind::timer_tick, uint64_t(k),
                [this, k, tick_slave] {
                  ImuSampleMsg msg{imu_seq_, tick_slave, uint64_t(imu_seq_)};
                  ++imu_seq_;
                  if (imu_out) imu_out(msg, tick_slave);
                  schedule_imu_tick(k + 1);
                });
}

void TriggerBoard::schedule_time_request(SimTime at_slave) {
  SimTime t_true = cfg_.clock.true_time_of_local(at_slave);
  sim_.schedule(t_true, device_, EventKind::filter_update_request,
                uint64_t(request_id_), [this, at_slave] {
                  pending_request_slave_ = slave_now();
                  if (time_request_out)
                    time_request_out(TimeRequest{request_id_});
                  ++request_id_;
                  schedule_time_request(at_slave + cfg_.filter_update_period);
                });
}

void TriggerBoard::on_time_answer(const TimeAnswer& answer,
                                  SimTime t_true_arrival) {
  TimeRequestSample sample{pending_request_slave_,
                           cfg_.clock.local_time(t_true_arrival),
                           answer.t_host};
  if (!filter_) {
    filter_ = initial_filter_state(sample, cfg_.filter_init);
    if (filter_init_out) filter_init_out(*filter_, sample);
    return;
  }
  FilterUpdate result = update(*filter_, cfg_.noise, sample);
  filter_ = result.state;
  if (filter_update_out) filter_update_out(result, sample);
}

bool TriggerBoard::channel_in_slow_mode(int channel_id) const {
  return channel(channel_id).slow;
}

uint32_t TriggerBoard::channel_seq(int channel_id) const {
  return channel(channel_id).seq;
}

SimTime TriggerBoard::exposure_estimate(int channel_id) const {
  return channel(channel_id).last_exposure;
}

uint64_t TriggerBoard::clamp_count(int channel_id) const {
  return channel(channel_id).clamp_count;
}

}  // namespace syncsim
