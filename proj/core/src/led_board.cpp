// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#include "syncsim/led_board.hpp"

#include <set>
#include <string>

#include "syncsim/errors.hpp"

namespace syncsim {

LedPattern led_encode(int count) {
  if (count < 0 || count >= kLedCounterModulus) {
    throw ConfigError("LED count out of range: " + std::to_string(count));
  }
  LedPattern p;
  p.striding = uint8_t(1u << (count % 4));
  p.binary = uint8_t(count / 4);
  return p;
}

int led_decode(const LedPattern& pattern) {
  int pos = -1;
  for (int i = 0; i < 4; ++i) {
    if (pattern.striding == (1u << i)) pos = i;
  }
  if (pos < 0 || pattern.binary >= 16) {
    throw ConfigError("undecodable LED pattern");
  }
  return int(pattern.binary) * 4 + pos;
}

int64_t LedTimingBoard::triggers_fired(SimTime t_true) const {
  SimTime local = clock_.local_time(t_true);
  if (local < first_) return 0;
  return floor_div((local - first_).nanos, period_.nanos) + 1;
}

int LedTimingBoard::count_at(SimTime t_true) const {
  int64_t n = triggers_fired(t_true);
  if (n <= 0) return -1;
  return int((n - 1) % kLedCounterModulus);
}

std::vector<VisibleState> LedTimingBoard::visible_states(SimTime t_start,
                                                         SimTime t_end) const {
  std::vector<VisibleState> out;
  if (t_end <= t_start) return out;
  SimTime cursor = t_start;
  while (cursor < t_end) {
    int64_t fired = triggers_fired(cursor);
    // True instant of the next transition: trigger index `fired` (0-based).
    SimTime next_slave = first_ + period_ * fired;
    SimTime next_true = clock_.true_time_of_local(next_slave);
    SimTime segment_end = next_true < t_end ? next_true : t_end;
    if (segment_end <= cursor) {
      // Transition exactly at the cursor; step over it.
      cursor = next_true;
      continue;
    }
    int count = fired <= 0 ? -1 : int((fired - 1) % kLedCounterModulus);
    if (!out.empty() && out.back().count == count) {
      out.back().dwell += segment_end - cursor;
    } else {
      out.push_back(VisibleState{count, segment_end - cursor});
    }
    cursor = segment_end;
  }
  return out;
}

int striding_led_count(const std::vector<VisibleState>& states,
                       SimTime min_dwell) {
  std::set<int> positions;
  for (const auto& s : states) {
    if (s.count >= 0 && s.dwell >= min_dwell) positions.insert(s.count % 4);
  }
  return int(positions.size());
}

int dominant_count(const std::vector<VisibleState>& states) {
  int best = -1;
  SimTime best_dwell{-1};
  for (const auto& s : states) {
    if (s.count < 0) continue;
    if (s.dwell >= best_dwell) {  // >= favors the later (entered) state
      best_dwell = s.dwell;
      best = s.count;
    }
  }
  return best;
}

}  // namespace syncsim
