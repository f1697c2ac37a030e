// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "syncsim/clock_filter.hpp"
#include "syncsim/messages.hpp"
#include "syncsim/time.hpp"

namespace syncsim {

struct SyncConfig {
  SimTime slow_period{sim_s(1)};
  SimTime match_threshold{sim_ms(250)};  // default: slow_period / 4
  int init_window{3};                    // consecutive agreeing offset pairs
  SimTime init_timeout{sim_s(20)};
  SimTime frame_period{sim_ms(100)};
  int missing_stamp_timeout_frames{2};
  SimTime stamp_buffer_horizon{sim_s(2)};
  bool translate_output{true};
};

enum class DiagnosticKind {
  missing_stamp,           // image quarantined, no board stamp arrived in time
  seq_gap,                 // inertial stream skipped sequence numbers
  stamp_evicted,           // unmatched board stamp aged out of the buffer
  init_unstable,           // offset candidates disagreed during startup
  init_timeout,            // startup matching never settled
  unmatched_init_image,    // startup image with no stamp inside the threshold
  negative_board_seq,      // image maps to a board sequence before zero
};

const char* to_string(DiagnosticKind k);

struct Diagnostic {
  DiagnosticKind kind;
  int camera{-1};  // -1 for the inertial stream
  int64_t a{0};    // kind-specific (sequence numbers, counts)
  int64_t b{0};
  SimTime at{};    // host-clock time the condition was detected
};

// An image bound to its mid-exposure timestamp, on the host timeline when
// translation is on, otherwise raw board time.
struct StampedImage {
  int camera_id{0};
  uint32_t image_seq{0};
  uint32_t board_seq{0};
  uint64_t payload_id{0};
  SimTime t_image{};
};

// Full inertial record reassembled from the minimal on-wire sample.
struct ImuRecord {
  uint32_t seq{0};
  SimTime t{};
  uint64_t sample_id{0};
  const char* frame_id{"imu"};
  std::array<double, 3> angular_velocity_cov{0.0, 0.0, 0.0};
  std::array<double, 3> linear_acceleration_cov{0.0, 0.0, 0.0};
};

// Host-side association. Pairs image messages (from the cameras) with
// timestamp messages (from the trigger board): startup discovers each
// camera's constant sequence offset by nearest-arrival matching under slow
// triggering, steady state is a pure sequence-number lookup. Messages of one
// stream must arrive in per-stream order; cross-stream order is arbitrary.
// The class never consults a clock of its own — time enters only through the
// arrival stamps — so recorded traces replay identically.
class Synchronizer {
 public:
  explicit Synchronizer(SyncConfig cfg);

  void on_image(const ImageMsg& msg, SimTime t_arrival);
  void on_stamp(const TimestampMsg& msg, SimTime t_arrival);
  void on_imu(const ImuSampleMsg& msg, SimTime t_arrival);

  // Deadline processing (startup resolution, quarantine, eviction) up to the
  // given host time. Also invoked internally by every on_* call.
  void poll(SimTime now);

  // Flush everything still pending at end of input.
  void finalize(SimTime now);

  // Skip the startup handshake for a camera whose sequence offset is known
  // up front (pre-configured rigs). Must be called before any message.
  void force_initialized(int camera_id, int64_t seq_offset);

  // Current translation state; return nullptr for raw board-time output.
  std::function<const FilterState*()> filter_provider;

  std::function<void(const StampedImage&)> stamped_out;
  std::function<void(const ImuRecord&)> imu_out;
  // Fires once per camera when its offset is pinned; the pipeline forwards
  // this to the trigger board as the init confirmation.
  std::function<void(int camera_id, int64_t seq_offset)> initialized_out;

  std::vector<Diagnostic> diagnostics;

  bool camera_initialized(int camera_id) const;
  bool camera_failed(int camera_id) const;
  int64_t seq_offset(int camera_id) const;
  uint64_t emitted(int camera_id) const;

 private:
  struct PendingImage {
    uint32_t seq;
    uint64_t payload;
    SimTime arrival;
  };
  struct BufferedStamp {
    uint32_t seq;
    SimTime stamp;
    SimTime arrival;
  };
  enum class Phase { initializing, initialized, failed };
  struct CameraAssoc {
    Phase phase{Phase::initializing};
    int64_t offset{0};  // n_image - n_board over matched pairs
    std::deque<PendingImage> init_images;
    std::deque<BufferedStamp> init_stamps;
    int64_t candidate{0};
    int agree{0};
    bool have_candidate{false};
    bool saw_activity{false};
    SimTime first_activity{};
    std::map<int64_t, BufferedStamp> stamps;  // steady state, keyed board seq
    std::deque<PendingImage> pending;         // steady state, image-seq order
    uint64_t emitted{0};
  };

  CameraAssoc& cam(int id);
  void resolve_init(int camera_id, CameraAssoc& c, SimTime now, bool flush);
  void promote(int camera_id, CameraAssoc& c, SimTime now);
  void drain(int camera_id, CameraAssoc& c, SimTime now, bool flush);
  void evict_stamps(int camera_id, CameraAssoc& c, SimTime now);
  SimTime output_time(SimTime board_stamp) const;

  SyncConfig cfg_;
  std::map<int, CameraAssoc> cameras_;
  uint32_t imu_next_seq_{0};
  bool imu_saw_any_{false};
  SimTime latest_{INT64_MIN};
};

}  // namespace syncsim
