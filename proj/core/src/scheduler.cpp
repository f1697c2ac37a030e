// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#include "syncsim/scheduler.hpp"

#include <string>
#include <utility>

namespace syncsim {

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::trigger_pulse:
      return "trigger_pulse";
    case EventKind::exposure_start:
      return "exposure_start";
    case EventKind::exposure_end:
      return "exposure_end";
    case EventKind::message_arrival:
      return "message_arrival";
    case EventKind::filter_update_request:
      return "filter_update_request";
    case EventKind::timer_tick:
      return "timer_tick";
  }
  return "?";
}

Simulator::Handle Simulator::schedule(SimTime at, DeviceId device,
                                      EventKind kind, uint64_t tag,
                                      Action action) {
  if (at < now_) {
    throw PastEventError("schedule at t=" + std::to_string(at.nanos) +
                         "ns before now=" + std::to_string(now_.nanos) + "ns");
  }
  uint64_t seq = next_seq_++;
  queue_.push(Entry{at, device, seq, kind, tag, std::move(action)});
  pending_.insert(seq);
  ++live_count_;
  return Handle{seq};
}

bool Simulator::cancel(Handle h) {
  if (!h.valid() || !pending_.erase(h.seq)) return false;
  cancelled_.insert(h.seq);
  --live_count_;
  return true;
}

bool Simulator::step_one(SimTime limit) {
  while (!queue_.empty()) {
    const Entry& top = queue_.top();
    if (top.at > limit) return false;
    if (cancelled_.erase(top.seq) > 0) {
      queue_.pop();
      continue;
    }
    Entry e{top.at, top.device, top.seq, top.kind, top.tag,
            std::move(const_cast<Entry&>(top).action)};
    queue_.pop();
    pending_.erase(e.seq);
    --live_count_;
    now_ = e.at;
    if (trace_sink) trace_sink(EventRecord{e.at, e.device, e.kind, e.tag, e.seq});
    e.action();
    return true;
  }
  return false;
}

uint64_t Simulator::run_until(SimTime t_end) {
  if (t_end < now_) {
    throw PastEventError("run_until into the past");
  }
  uint64_t steps = 0;
  while (step_one(t_end)) ++steps;
  now_ = t_end;
  return steps;
}

uint64_t Simulator::run_all() {
  uint64_t steps = 0;
  while (step_one(SimTime{INT64_MAX})) ++steps;
  return steps;
}

}  // namespace syncsim
