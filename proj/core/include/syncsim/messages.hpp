// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "syncsim/time.hpp"

namespace syncsim {

// Mid-exposure timestamp record produced by the trigger board. `seq` is the
// board-assigned sequence number for this camera channel; `stamp` is the
// mid-exposure instant on the board (slave) clock.
struct TimestampMsg {
  int camera_id{0};
  uint32_t seq{0};
  SimTime stamp{};
};

// Image announcement sent by a camera. `seq` is the camera's own frame
// counter, independent of the board's. The payload id is opaque to the
// association logic; the harness uses it to check pairings against ground
// truth.
struct ImageMsg {
  int camera_id{0};
  uint32_t seq{0};
  uint64_t payload_id{0};
};

// Minimal inertial sample: sequence, slave-clock stamp, raw sample handle.
// The host reassembles it into a full record.
struct ImuSampleMsg {
  uint32_t seq{0};
  SimTime stamp{};
  uint64_t sample_id{0};
};

// Slave -> host: ask for the current host time. The slave keeps its own
// request-send reading; `id` matches the answer to the request.
struct TimeRequest {
  uint32_t id{0};
};

// Host -> slave: the host clock reading taken when it handled the request.
struct TimeAnswer {
  uint32_t id{0};
  SimTime t_host{};
};

// Host -> board: association for this camera is initialized; switch the
// channel to full-rate compensated triggering.
struct InitConfirm {
  int camera_id{0};
};

}  // namespace syncsim
