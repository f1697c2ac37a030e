// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <unordered_set>
#include <vector>

#include "syncsim/errors.hpp"
#include "syncsim/time.hpp"

namespace syncsim {

using DeviceId = uint32_t;

enum class EventKind : uint8_t {
  trigger_pulse,
  exposure_start,
  exposure_end,
  message_arrival,
  filter_update_request,
  timer_tick,
};

const char* to_string(EventKind k);

// What the trace sink sees for every processed event. `seq` is the global
// insertion sequence number, which also serves as the final ordering tiebreak.
struct EventRecord {
  SimTime at;
  DeviceId device;
  EventKind kind;
  uint64_t tag;
  uint64_t seq;

  bool operator==(const EventRecord&) const = default;
};

// Deterministic single-threaded discrete-event scheduler. Simultaneous events
// are processed in (device id, insertion sequence) order, so a fixed seed and
// configuration always replays the exact same event stream. The scheduler is
// the only source of time in a simulation; nothing may consult the wall clock.
class Simulator {
 public:
  using Action = std::function<void()>;

  struct Handle {
    uint64_t seq{0};
    bool valid() const { return seq != 0; }
  };

  // Enqueue an event. Throws PastEventError if `at` is before now().
  Handle schedule(SimTime at, DeviceId device, EventKind kind, uint64_t tag,
                  Action action);

  // Cancel a pending event. Returns false if it already fired or was
  // cancelled before.
  bool cancel(Handle h);

  // Process every event with fire time <= t_end in order, leave now() ==
  // t_end, and return the number of events processed.
  uint64_t run_until(SimTime t_end);

  // Process events until the queue is empty; returns the step count.
  uint64_t run_all();

  SimTime now() const { return now_; }
  bool empty() const { return live_count_ == 0; }

  // Invoked for every processed event, before its action runs.
  std::function<void(const EventRecord&)> trace_sink;

 private:
  struct Entry {
    SimTime at;
    DeviceId device;
    uint64_t seq;
    EventKind kind;
    uint64_t tag;
    Action action;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.at != b.at) return a.at > b.at;
      if (a.device != b.device) return a.device > b.device;
      return a.seq > b.seq;
    }
  };

  bool step_one(SimTime limit);

  std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
  std::unordered_set<uint64_t> pending_;            // seqs still scheduled
  std::unordered_set<uint64_t> cancelled_;          // seqs to skip on surfacing
  SimTime now_{};
  uint64_t next_seq_{1};
  uint64_t live_count_{0};
};

}  // namespace syncsim
