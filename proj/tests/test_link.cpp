// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#include <vector>

#include <doctest.h>

#include "syncsim/link.hpp"

using namespace syncsim;

TEST_CASE("no jitter means every delivery takes exactly the base latency") {
  Simulator sim;
  MessageLink link(sim, 2, LinkConfig{sim_ms(5), {}, 0.0}, 1);
  std::vector<SimTime> arrivals;
  for (int i = 0; i < 5; ++i) {
    sim.run_until(sim_ms(10 * i));
    link.send(0, [&, i] { arrivals.push_back(sim.now()); });
  }
  sim.run_until(sim_s(1));
  REQUIRE(arrivals.size() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(arrivals[i] == sim_ms(10 * i) + sim_ms(5));
  }
}

TEST_CASE("a link never reorders its own messages") {
  Simulator sim;
  LinkConfig cfg{sim_ms(2),
                 JitterModel{JitterModel::Kind::uniform, sim_ms(2), {}}, 0.0};
  MessageLink link(sim, 2, cfg, 7);
  std::vector<int> arrival_order;
  for (int i = 0; i < 200; ++i) {
    sim.run_until(SimTime{i * 100'000});  // sends 0.1 ms apart, jitter 2 ms
    link.send(uint64_t(i), [&, i] { arrival_order.push_back(i); });
  }
  sim.run_until(sim_s(1));
  REQUIRE(arrival_order.size() == 200);
  for (int i = 0; i < 200; ++i) CHECK(arrival_order[i] == i);
}

TEST_CASE("drops are deterministic per seed and spare control messages") {
  auto count_drops = [](uint64_t seed) {
    Simulator sim;
    MessageLink link(sim, 2, LinkConfig{sim_ms(1), {}, 0.3}, seed);
    uint64_t delivered = 0;
    for (int i = 0; i < 500; ++i) {
      link.send(0, [&] { ++delivered; });
    }
    link.send(0, [] {}, /*droppable=*/false);
    sim.run_until(sim_s(1));
    return std::pair{link.dropped(), delivered};
  };
  auto [d1, del1] = count_drops(11);
  auto [d2, del2] = count_drops(11);
  CHECK(d1 == d2);
  CHECK(del1 == del2);
  CHECK(d1 > 100);  // ~150 expected at p=0.3
  CHECK(d1 < 200);
  CHECK(del1 == 500 - d1);
}
