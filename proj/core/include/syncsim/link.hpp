// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

#include "syncsim/clock.hpp"
#include "syncsim/rng.hpp"
#include "syncsim/scheduler.hpp"
#include "syncsim/time.hpp"

namespace syncsim {

struct LinkConfig {
  SimTime base_latency{};
  JitterModel jitter{};
  double drop_prob{0.0};  // applies only to droppable sends
};

// One serialized transport direction (a USB bulk pipe, a serial line). Every
// send is delayed by base latency plus a jitter sample, clamped so arrivals
// never precede the send and never reorder within the link: messages on one
// link form a single in-order stream.
class MessageLink {
 public:
  MessageLink(Simulator& sim, DeviceId receiver, LinkConfig cfg, uint64_t seed)
      : sim_(sim), receiver_(receiver), cfg_(cfg), rng_(seed) {}

  // Deliver `deliver` at the receiver after the sampled transport delay.
  // Returns false if the message was dropped. Drops still consume a jitter
  // sample so traffic patterns stay comparable across drop probabilities.
  bool send(uint64_t tag, std::function<void()> deliver, bool droppable = true);

  uint64_t sent() const { return sent_; }
  uint64_t dropped() const { return dropped_; }

 private:
  Simulator& sim_;
  DeviceId receiver_;
  LinkConfig cfg_;
  Rng rng_;
  SimTime last_arrival_{INT64_MIN};
  uint64_t sent_{0};
  uint64_t dropped_{0};
};

}  // namespace syncsim
