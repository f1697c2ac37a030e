// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#include <vector>

#include <doctest.h>

#include "syncsim/rng.hpp"
#include "syncsim/scheduler.hpp"

using namespace syncsim;

TEST_CASE("zero-delay event fires on the next step") {
  Simulator sim;
  bool fired = false;
  sim.schedule(sim.now(), 1, EventKind::timer_tick, 0, [&] { fired = true; });
  sim.run_until(sim.now());
  CHECK(fired);
}

TEST_CASE("simultaneous events fire in device-id order") {
  Simulator sim;
  std::vector<int> order;
  // Insert the higher device first; the lower id must still run first.
  sim.schedule(sim_ms(1), 7, EventKind::timer_tick, 0, [&] { order.push_back(7); });
  sim.schedule(sim_ms(1), 3, EventKind::timer_tick, 0, [&] { order.push_back(3); });
  sim.run_until(sim_ms(2));
  CHECK(order == std::vector<int>{3, 7});
}

TEST_CASE("same device and time falls back to insertion order") {
  Simulator sim;
  std::vector<int> order;
  sim.schedule(sim_ms(1), 1, EventKind::timer_tick, 0, [&] { order.push_back(1); });
  sim.schedule(sim_ms(1), 1, EventKind::timer_tick, 0, [&] { order.push_back(2); });
  sim.run_until(sim_ms(1));
  CHECK(order == std::vector<int>{1, 2});
}

TEST_CASE("scheduling in the past throws") {
  Simulator sim;
  sim.schedule(sim_ms(5), 1, EventKind::timer_tick, 0, [] {});
  sim.run_until(sim_ms(5));
  CHECK_THROWS_AS(
      sim.schedule(sim_ms(5) - sim_ns(1), 1, EventKind::timer_tick, 0, [] {}),
      PastEventError);
}

TEST_CASE("run_until on an empty queue advances time with zero steps") {
  Simulator sim;
  CHECK(sim.run_until(sim_s(3)) == 0);
  CHECK(sim.now() == sim_s(3));
}

TEST_CASE("periodic events in [0, T] step floor(T/p)+1 times") {
  Simulator sim;
  const SimTime period = sim_ms(30);
  const SimTime t_end = sim_ms(1000);
  uint64_t count = 0;
  std::function<void()> tick = [&] {
    ++count;
    sim.schedule(sim.now() + period, 1, EventKind::timer_tick, 0, tick);
  };
  sim.schedule(SimTime{}, 1, EventKind::timer_tick, 0, tick);
  uint64_t steps = sim.run_until(t_end);
  CHECK(steps == uint64_t(t_end.nanos / period.nanos) + 1);
  CHECK(steps == count);
  CHECK(sim.now() == t_end);
}

TEST_CASE("cancelled events never fire") {
  Simulator sim;
  bool fired = false;
  auto h = sim.schedule(sim_ms(2), 1, EventKind::timer_tick, 0,
                        [&] { fired = true; });
  CHECK(sim.cancel(h));
  CHECK_FALSE(sim.cancel(h));  // second cancel is a no-op
  sim.run_until(sim_ms(5));
  CHECK_FALSE(fired);
}

TEST_CASE("events are processed in non-decreasing time order") {
  Simulator sim;
  Rng rng(123);
  SimTime prev{-1};
  size_t checked = 0;
  sim.trace_sink = [&](const EventRecord& e) {
    CHECK(e.at >= prev);
    prev = e.at;
    ++checked;
  };
  for (int i = 0; i < 500; ++i) {
    sim.schedule(SimTime{rng.uniform_i64(0, 1'000'000)},
                 DeviceId(rng.uniform_i64(1, 5)), EventKind::timer_tick, 0,
                 [] {});
  }
  sim.run_until(sim_ms(2));
  CHECK(checked == 500);
}

namespace {

// A self-rescheduling workload with seeded randomness, recording its trace.
std::vector<EventRecord> run_workload(uint64_t seed) {
  Simulator sim;
  std::vector<EventRecord> trace;
  sim.trace_sink = [&](const EventRecord& e) { trace.push_back(e); };
  auto rng = std::make_shared<Rng>(seed);
  std::function<void()> churn = [&sim, rng, &churn] {
    if (sim.now() > sim_ms(50)) return;
    int n = int(rng->uniform_i64(1, 3));
    for (int i = 0; i < n; ++i) {
      sim.schedule(sim.now() + SimTime{rng->uniform_i64(1, 200'000)},
                   DeviceId(rng->uniform_i64(1, 4)), EventKind::timer_tick,
                   rng->next_u64() % 16, churn);
    }
  };
  sim.schedule(SimTime{}, 1, EventKind::timer_tick, 0, churn);
  sim.run_until(sim_ms(60));
  return trace;
}

}  // namespace

TEST_CASE("identical seed and config give a bit-identical event trace") {
  auto a = run_workload(42);
  auto b = run_workload(42);
  REQUIRE(a.size() == b.size());
  CHECK(a == b);
  auto c = run_workload(43);
  CHECK(a != c);
}
