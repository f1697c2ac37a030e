// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#include "syncsim/pipeline.hpp"

#include <algorithm>

#include "syncsim/errors.hpp"

namespace syncsim {

const std::vector<ExposureTruth> GroundTruth::kEmpty;

void GroundTruth::record_exposure_start(int camera, uint64_t payload,
                                        SimTime t_start) {
  auto& v = exposures_[camera];
  ExposureTruth e;
  e.camera_id = camera;
  e.payload = payload;
  e.t_start = t_start;
  by_payload_[payload] = {camera, v.size()};
  v.push_back(e);
}

void GroundTruth::record_exposure_end(int camera, uint64_t payload,
                                      SimTime t_start, SimTime t_end) {
  auto it = by_payload_.find(payload);
  if (it == by_payload_.end()) return;
  ExposureTruth& e = exposures_[camera][it->second.second];
  e.t_start = t_start;
  e.t_end = t_end;
  e.complete = true;
}

void GroundTruth::record_spurious(int camera, uint64_t payload) {
  auto& v = exposures_[camera];
  ExposureTruth e;
  e.camera_id = camera;
  e.payload = payload;
  e.spurious = true;
  by_payload_[payload] = {camera, v.size()};
  v.push_back(e);
}

void GroundTruth::record_imu(uint32_t seq, SimTime tick_slave, SimTime t_true) {
  imu_.push_back(ImuTruth{seq, tick_slave, t_true});
}

void GroundTruth::finalize(const std::map<int, uint64_t>& stamps_per_camera) {
  // Stamps and triggered exposures are 1:1 and in the same order, so the
  // k-th non-spurious exposure carries board sequence k.
  for (auto& [camera, exposures] : exposures_) {
    int64_t seq = 0;
    auto limit_it = stamps_per_camera.find(camera);
    int64_t limit = limit_it == stamps_per_camera.end()
                        ? 0
                        : int64_t(limit_it->second);
    for (auto& e : exposures) {
      if (e.spurious) continue;
      if (seq >= limit) break;  // exposure still in flight at cutoff
      e.board_seq = seq++;
    }
  }
}

const std::vector<ExposureTruth>& GroundTruth::exposures(int camera) const {
  auto it = exposures_.find(camera);
  return it == exposures_.end() ? kEmpty : it->second;
}

const ExposureTruth* GroundTruth::by_payload(uint64_t payload) const {
  auto it = by_payload_.find(payload);
  if (it == by_payload_.end()) return nullptr;
  return &exposures_.at(it->second.first)[it->second.second];
}

uint64_t GroundTruth::payload_for_stamp(int camera, int64_t board_seq) const {
  for (const auto& e : exposures(camera)) {
    if (!e.spurious && e.board_seq == board_seq) return e.payload;
  }
  return 0;
}

Pipeline::Pipeline(const ScenarioConfig& cfg) : cfg_(cfg) {
  BoardConfig bc;
  bc.clock = cfg_.slave_clock;
  for (const auto& cam : cfg_.cameras) bc.cameras.push_back(cam.channel);
  bc.imu_enabled = cfg_.imu_enabled;
  bc.imu_rate_hz = cfg_.imu_rate_hz;
  bc.start_at_slave = cfg_.board_start_slave;
  bc.filter_enabled = cfg_.filter.enabled;
  bc.connect_at_slave = cfg_.filter.connect_at_slave;
  bc.filter_update_period = cfg_.filter.update_period;
  bc.noise = cfg_.filter.noise;
  bc.filter_init = cfg_.filter.init;
  board_ = std::make_unique<TriggerBoard>(sim_, kBoardDevice, bc);

  board_to_host_ = std::make_unique<MessageLink>(
      sim_, kHostDevice,
      LinkConfig{cfg_.board_to_host.base_latency, cfg_.board_to_host.jitter,
                 cfg_.board_to_host.drop_prob},
      Rng::derive(cfg_.seed, "link.board_to_host"));
  host_to_board_ = std::make_unique<MessageLink>(
      sim_, kBoardDevice,
      LinkConfig{cfg_.host_to_board.base_latency, cfg_.host_to_board.jitter,
                 cfg_.host_to_board.drop_prob},
      Rng::derive(cfg_.seed, "link.host_to_board"));

  SyncConfig sync_cfg = cfg_.sync;
  sync_ = std::make_unique<Synchronizer>(sync_cfg);
  sync_->filter_provider = [this]() { return board_->filter_state(); };

  wire_cameras();
  wire_host();

  // Poll cadence for host-side deadlines: a quarter of the fastest frame
  // period keeps quarantine decisions close to their deadlines.
  if (!cfg_.cameras.empty()) {
    int64_t fastest = INT64_MAX;
    for (const auto& cam : cfg_.cameras)
      fastest = std::min(fastest, cam.channel.period.nanos);
    poll_period_ = SimTime{std::clamp<int64_t>(fastest / 4, 1'000'000,
                                               500'000'000)};
  }
}

void Pipeline::wire_cameras() {
  for (const auto& cam_cfg : cfg_.cameras) {
    int id = cam_cfg.channel.id;
    auto cam = std::make_unique<SimCamera>(
        sim_, kCameraDeviceBase + DeviceId(id), cam_cfg.device,
        Rng::derive(cfg_.seed, "camera." + std::to_string(id)));
    cam->exposure_start_truth = [this](int c, uint64_t p, SimTime t) {
      truth_.record_exposure_start(c, p, t);
    };
    cam->exposure_end_truth = [this](int c, uint64_t p, SimTime t0, SimTime t1) {
      truth_.record_exposure_end(c, p, t0, t1);
    };
    cam->spurious_truth = [this](int c, uint64_t p) {
      truth_.record_spurious(c, p);
    };
    camera_links_[id] = std::make_unique<MessageLink>(
        sim_, kHostDevice,
        LinkConfig{cfg_.camera_to_host.base_latency, cfg_.camera_to_host.jitter,
                   cfg_.camera_to_host.drop_prob},
        Rng::derive(cfg_.seed, "link.camera." + std::to_string(id)));
    cameras_[id] = std::move(cam);
  }

  // Strobe fan-out. Each camera's strobe feeds its board channel; a master's
  // strobe additionally drives its slave camera's exposure window.
  for (const auto& cam_cfg : cfg_.cameras) {
    int id = cam_cfg.channel.id;
    SimCamera* cam = cameras_[id].get();
    SimTime strobe_delay = cam_cfg.strobe_line_delay;
    std::vector<std::pair<SimCamera*, SimTime>> followers;
    for (const auto& other : cfg_.cameras) {
      if (other.channel.mode == CameraMode::strobe_slave &&
          other.channel.master_channel == id) {
        followers.push_back(
            {cameras_[other.channel.id].get(), other.trigger_line_delay});
      }
    }
    cam->strobe_out = [this, id, strobe_delay, followers](bool rising,
                                                          SimTime t_edge) {
      sim_.schedule(t_edge + strobe_delay, kBoardDevice,
                    rising ? EventKind::exposure_start : EventKind::exposure_end,
                    uint64_t(id), [this, id, rising] {
                      board_->on_exposure_edge(id, rising, sim_.now());
                    });
      for (auto [follower, delay] : followers) {
        sim_.schedule(t_edge + delay,
                      kCameraDeviceBase + DeviceId(follower->id()),
                      EventKind::trigger_pulse, uint64_t(follower->id()),
                      [follower, rising, this] {
                        follower->on_external_exposure(rising, sim_.now());
                      });
      }
    };

    cam->image_out = [this, id](const ImageMsg& msg) {
      camera_links_[id]->send(msg.payload_id, [this, msg] {
        SimTime arrival = host_local(sim_.now());
        if (cfg_.write_message_trace) {
          message_trace.push_back(TraceRecord{TraceRecord::Stream::image,
                                              msg.camera_id, arrival, msg.seq,
                                              SimTime{}, msg.payload_id});
        }
        sync_->on_image(msg, arrival);
      });
    };
  }

  board_->trigger_out = [this](int channel_id, SimTime t_true) {
    auto it = cameras_.find(channel_id);
    if (it == cameras_.end()) return;
    SimCamera* cam = it->second.get();
    SimTime delay{};
    for (const auto& c : cfg_.cameras)
      if (c.channel.id == channel_id) delay = c.trigger_line_delay;
    sim_.schedule(t_true + delay, kCameraDeviceBase + DeviceId(channel_id),
                  EventKind::trigger_pulse, uint64_t(channel_id),
                  [cam, this] { cam->on_trigger(sim_.now()); });
  };

  board_->stamp_out = [this](const TimestampMsg& msg, const StampInfo& info) {
    stamp_records.push_back(StampRecord{msg, info, sim_.now()});
    board_to_host_->send(msg.seq, [this, msg] {
      SimTime arrival = host_local(sim_.now());
      if (cfg_.write_message_trace) {
        message_trace.push_back(TraceRecord{TraceRecord::Stream::stamp,
                                            msg.camera_id, arrival, msg.seq,
                                            msg.stamp, 0});
      }
      sync_->on_stamp(msg, arrival);
    });
  };

  board_->imu_out = [this](const ImuSampleMsg& msg, SimTime tick_slave) {
    truth_.record_imu(msg.seq, tick_slave, sim_.now());
    board_to_host_->send(msg.seq, [this, msg] {
      SimTime arrival = host_local(sim_.now());
      if (cfg_.write_message_trace) {
        message_trace.push_back(TraceRecord{TraceRecord::Stream::imu, -1,
                                            arrival, msg.seq, msg.stamp,
                                            msg.sample_id});
      }
      sync_->on_imu(msg, arrival);
    });
  };
}

void Pipeline::wire_host() {
  board_->time_request_out = [this](const TimeRequest& rq) {
    request_send_times_.push_back(sim_.now());
    board_to_host_->send(
        rq.id,
        [this, rq] {
          // The host answers in the arrival event with its current clock.
          TimeAnswer ans{rq.id, host_local(sim_.now())};
          host_to_board_->send(
              ans.id, [this, ans] { board_->on_time_answer(ans, sim_.now()); },
              /*droppable=*/false);
        },
        /*droppable=*/false);
  };

  board_->filter_update_out = [this](const FilterUpdate& upd,
                                     const TimeRequestSample& sample) {
    EkfLogRow row;
    row.index = uint32_t(ekf_log.size());
    row.sample = sample;
    row.result = upd;
    if (!request_send_times_.empty()) {
      row.t_request_true = request_send_times_.front();
      request_send_times_.pop_front();
    }
    ekf_log.push_back(row);
  };
  board_->filter_init_out = [this](const FilterState&,
                                   const TimeRequestSample& sample) {
    filter_initialized = true;
    filter_init_sample = sample;
    if (!request_send_times_.empty()) {
      filter_init_true = request_send_times_.front();
      request_send_times_.pop_front();
    }
  };

  sync_->stamped_out = [this](const StampedImage& s) {
    stamped_images.push_back(s);
  };
  sync_->imu_out = [this](const ImuRecord& r) { imu_records.push_back(r); };
  sync_->initialized_out = [this](int camera_id, int64_t) {
    host_to_board_->send(
        uint64_t(camera_id),
        [this, camera_id] {
          if (!init_confirm_true.contains(camera_id)) {
            init_confirm_true[camera_id] = sim_.now();
          }
          board_->on_init_confirm(camera_id);
        },
        /*droppable=*/false);
  };

  // Cameras configured to skip the handshake are pre-registered with a zero
  // offset: their image and stamp counters start together.
  for (const auto& cam : cfg_.cameras) {
    if (cam.channel.start_initialized) {
      sync_->force_initialized(cam.channel.id, 0);
    }
  }
}

void Pipeline::schedule_host_poll() {
  sim_.schedule(sim_.now() + poll_period_, kHostDevice, EventKind::timer_tick,
                0, [this] {
                  sync_->poll(host_local(sim_.now()));
                  schedule_host_poll();
                });
}

void Pipeline::run_until(SimTime t_true) {
  if (!started_) {
    started_ = true;
    for (auto& [id, cam] : cameras_) cam->start();
    board_->start();
    schedule_host_poll();
  }
  sim_.run_until(t_true);
}

void Pipeline::finish() {
  if (finished_) return;
  finished_ = true;
  sync_->finalize(host_local(sim_.now()));
  std::map<int, uint64_t> stamp_counts;
  for (const auto& rec : stamp_records) {
    stamp_counts[rec.msg.camera_id] =
        std::max(stamp_counts[rec.msg.camera_id], uint64_t(rec.msg.seq) + 1);
  }
  truth_.finalize(stamp_counts);
}

}  // namespace syncsim
