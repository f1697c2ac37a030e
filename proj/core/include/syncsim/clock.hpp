// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "syncsim/rng.hpp"
#include "syncsim/time.hpp"

namespace syncsim {

// Maps global true time onto one device's local clock. The rate error is an
// exact rational (parts per billion), the reading is floor-quantized to the
// device timer resolution, and the whole map stays in integer arithmetic:
//
//   local(t) = quantize(initial_offset + floor(t * (1e9 + skew_ppb) / 1e9))
//
// which is exactly initial_offset + t * (1 + skew_ppb * 1e-9) rounded down.
struct ClockModel {
  int64_t skew_ppb{0};
  SimTime initial_offset{};
  SimTime tick_quantum{1};

  SimTime local_time(SimTime t_true) const;

  // Earliest true instant whose local reading is >= t_local. This is the
  // instant a timer armed for t_local fires. Requires skew_ppb > -1e9.
  SimTime true_time_of_local(SimTime t_local) const;
};

// Additive delay noise for a transport leg. `none` adds exactly zero, so a
// link configured with it delivers at precisely its base latency.
struct JitterModel {
  enum class Kind { none, uniform, gaussian };
  Kind kind{Kind::none};
  SimTime half_width{};  // uniform: samples in [-half_width, +half_width]
  SimTime sigma{};       // gaussian

  SimTime sample(Rng& rng) const;
};

}  // namespace syncsim
