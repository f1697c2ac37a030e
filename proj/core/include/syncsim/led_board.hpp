// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "syncsim/clock.hpp"
#include "syncsim/time.hpp"

namespace syncsim {

// Rendered state of the timing board's eight counting LEDs for one count.
// The right group of four shows a single lit position that strides one step
// per count; the left group shows floor(count / 4) in binary. Together they
// encode a counter that overflows at 64. The two outermost reference LEDs
// are always on and carry no information.
struct LedPattern {
  uint8_t striding{0};  // one-hot, bit (count % 4)
  uint8_t binary{0};    // count / 4, 4 bits
};

constexpr int kLedCounterModulus = 64;

LedPattern led_encode(int count);
// Exact inverse of led_encode; throws ConfigError on a non-decodable pattern.
int led_decode(const LedPattern& pattern);

// One board state visible during an exposure, with its dwell time.
struct VisibleState {
  int count{0};
  SimTime dwell{};
};

// A frame captured while the board is running: the exposure window in true
// time plus every board state active inside it.
struct CapturedFrame {
  int camera_id{0};
  SimTime t_start{};
  SimTime t_end{};
  std::vector<VisibleState> states;
};

// The timing board counts up one step per trigger, overflowing at 64. It is
// triggered off the same slave clock as the cameras, so its transitions sit
// exactly on the slave-time grid `first_trigger_slave + k * period` and the
// whole history is closed-form; no events are needed to query it.
class LedTimingBoard {
 public:
  LedTimingBoard(ClockModel clock, SimTime period, SimTime first_trigger_slave)
      : clock_(clock), period_(period), first_(first_trigger_slave) {}

  // Number of triggers that have fired at or before t_true; count is
  // (triggers - 1) % 64, or -1 before the first trigger.
  int64_t triggers_fired(SimTime t_true) const;
  int count_at(SimTime t_true) const;

  // Every state active during [t_start, t_end], in time order with dwells.
  std::vector<VisibleState> visible_states(SimTime t_start,
                                           SimTime t_end) const;

  SimTime period() const { return period_; }

 private:
  ClockModel clock_;
  SimTime period_;
  SimTime first_;
};

// Number of distinct striding-LED positions lit across the visible states
// whose dwell is at least `min_dwell`.
int striding_led_count(const std::vector<VisibleState>& states,
                       SimTime min_dwell);

// The count a frame reads: the visible state with the largest dwell, ties
// resolved toward the later state (the one entered during the exposure).
int dominant_count(const std::vector<VisibleState>& states);

}  // namespace syncsim
