// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <deque>
#include <map>
#include <memory>
#include <unordered_map>
#include <vector>

#include "syncsim/camera.hpp"
#include "syncsim/link.hpp"
#include "syncsim/scenario.hpp"
#include "syncsim/scheduler.hpp"
#include "syncsim/synchronizer.hpp"
#include "syncsim/trace.hpp"
#include "syncsim/trigger_board.hpp"

namespace syncsim {

// What actually happened to one camera frame, in true time. board_seq /
// payload cross-links are filled by GroundTruth::finalize().
struct ExposureTruth {
  int camera_id{0};
  uint64_t payload{0};
  SimTime t_start{};
  SimTime t_end{};
  bool complete{false};
  bool spurious{false};
  int64_t board_seq{-1};

  SimTime mid() const { return t_start + SimTime{(t_end - t_start).nanos / 2}; }
};

struct ImuTruth {
  uint32_t seq{0};
  SimTime tick_slave{};
  SimTime t_true{};
};

// Per-camera frame histories recorded outside the production data path.
// Stamps and exposures of one camera are both strictly ordered and 1:1, so
// board sequence k names the k-th exposure; finalize() links them.
class GroundTruth {
 public:
  void record_exposure_start(int camera, uint64_t payload, SimTime t_start);
  void record_exposure_end(int camera, uint64_t payload, SimTime t_start,
                           SimTime t_end);
  void record_spurious(int camera, uint64_t payload);
  void record_imu(uint32_t seq, SimTime tick_slave, SimTime t_true);
  void finalize(const std::map<int, uint64_t>& stamps_per_camera);

  const std::vector<ExposureTruth>& exposures(int camera) const;
  const ExposureTruth* by_payload(uint64_t payload) const;
  // Payload of the exposure a board stamp names; 0 if it never exposed.
  uint64_t payload_for_stamp(int camera, int64_t board_seq) const;
  const std::vector<ImuTruth>& imu() const { return imu_; }

 private:
  std::map<int, std::vector<ExposureTruth>> exposures_;
  std::unordered_map<uint64_t, std::pair<int, size_t>> by_payload_;
  std::vector<ImuTruth> imu_;
  static const std::vector<ExposureTruth> kEmpty;
};

struct StampRecord {
  TimestampMsg msg;
  StampInfo info;
  SimTime t_emit_true{};
};

struct EkfLogRow {
  uint32_t index{0};
  TimeRequestSample sample;
  FilterUpdate result;
  SimTime t_request_true{};
};

// Assembles the whole simulated rig from a scenario: trigger board and its
// clock, cameras with line delays and strobe routing, transport links, the
// host with its association logic and time service, plus passive recorders.
class Pipeline {
 public:
  explicit Pipeline(const ScenarioConfig& cfg);

  void run_until(SimTime t_true);
  // Flush association state at end of input and link stamps to exposures.
  void finish();

  Simulator& sim() { return sim_; }
  TriggerBoard& board() { return *board_; }
  Synchronizer& sync() { return *sync_; }
  GroundTruth& truth() { return truth_; }
  const ScenarioConfig& config() const { return cfg_; }

  SimTime host_local(SimTime t_true) const {
    return cfg_.host_clock.local_time(t_true);
  }

  // Collected streams.
  std::vector<StampRecord> stamp_records;
  std::vector<EkfLogRow> ekf_log;
  bool filter_initialized{false};
  SimTime filter_init_true{};
  TimeRequestSample filter_init_sample;
  std::vector<StampedImage> stamped_images;
  std::vector<ImuRecord> imu_records;
  std::vector<TraceRecord> message_trace;
  std::map<int, SimTime> init_confirm_true;  // camera -> when the host confirmed

  static constexpr DeviceId kHostDevice = 1;
  static constexpr DeviceId kBoardDevice = 2;
  static constexpr DeviceId kCameraDeviceBase = 10;

 private:
  void wire_cameras();
  void wire_host();
  void schedule_host_poll();

  ScenarioConfig cfg_;
  Simulator sim_;
  std::unique_ptr<TriggerBoard> board_;
  std::map<int, std::unique_ptr<SimCamera>> cameras_;
  std::unique_ptr<Synchronizer> sync_;
  std::unique_ptr<MessageLink> board_to_host_;
  std::unique_ptr<MessageLink> host_to_board_;
  std::map<int, std::unique_ptr<MessageLink>> camera_links_;
  GroundTruth truth_;
  std::deque<SimTime> request_send_times_;
  SimTime poll_period_{sim_ms(50)};
  bool started_{false};
  bool finished_{false};
};

}  // namespace syncsim
