// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#include "syncsim/link.hpp"

#include <algorithm>
#include <utility>

namespace syncsim {

bool MessageLink::send(uint64_t tag, std::function<void()> deliver,
                       bool droppable) {
  SimTime delay = cfg_.base_latency + cfg_.jitter.sample(rng_);
  if (delay.nanos < 0) delay = {};
  if (droppable && cfg_.drop_prob > 0.0 && rng_.bernoulli(cfg_.drop_prob)) {
    ++dropped_;
    return false;
  }
  SimTime arrival = std::max(sim_.now() + delay, last_arrival_);
  last_arrival_ = arrival;
  sim_.schedule(arrival, receiver_, EventKind::message_arrival, tag,
                std::move(deliver));
  ++sent_;
  return true;
}

}  // namespace syncsim
