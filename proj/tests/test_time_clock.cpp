// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#include <cfenv>
#include <cmath>

#include <doctest.h>

#include "syncsim/clock.hpp"
#include "syncsim/rng.hpp"
#include "syncsim/time.hpp"

using namespace syncsim;

TEST_CASE("SimTime arithmetic is exact integer math") {
  CHECK(sim_ms(5) + sim_us(250) == SimTime{5'250'000});
  CHECK(sim_s(1) - sim_ns(1) == SimTime{999'999'999});
  CHECK((sim_ms(3) * 4) == sim_ms(12));
  CHECK(-sim_us(7) == SimTime{-7'000});
}

TEST_CASE("quantize_floor rounds toward negative infinity") {
  SimTime q{10'000};
  CHECK(quantize_floor(SimTime{25'000}, q) == SimTime{20'000});
  CHECK(quantize_floor(SimTime{-25'000}, q) == SimTime{-30'000});
  CHECK(quantize_floor(SimTime{20'000}, q) == SimTime{20'000});
  CHECK(quantize_ceil(SimTime{25'000}, q) == SimTime{30'000});
  CHECK(quantize_ceil(SimTime{-25'000}, q) == SimTime{-20'000});
}

TEST_CASE("half_round_even matches banker's rounding of d/2") {
  // Oracle: rint on doubles ties to even under the default rounding mode.
  std::fesetround(FE_TONEAREST);
  for (int64_t d = 0; d < 2000; ++d) {
    int64_t expect = int64_t(std::rint(double(d) / 2.0));
    CHECK(half_round_even(SimTime{d}).nanos == expect);
  }
}

namespace {

void check_local(int64_t t, int64_t ppb, int64_t offset, int64_t quantum,
                 int64_t expect) {
  ClockModel c{ppb, SimTime{offset}, SimTime{quantum}};
  CHECK(c.local_time(SimTime{t}).nanos == expect);
}

}  // namespace

TEST_CASE("local_time matches the exact rational oracle") {
  // Frozen values computed with arbitrary-precision integer arithmetic.
  check_local(5906429525147LL, -152851, 825907252LL, 25000, 5906352625000LL);
  check_local(7484795084358LL, 59184, 701002874LL, 25000, 7485939050000LL);
  check_local(26303934443486LL, -92241, -250701579LL, 10000, 26301257440000LL);
  check_local(9929667190513LL, 198088, -776600776LL, 10000, 9930857530000LL);
  check_local(34962515097884LL, -35067, 122873019LL, 1, 34961411940386LL);
  check_local(13964575551034LL, -53604, -434255470LL, 25000, 13963392725000LL);
  check_local(24127809641203LL, -28602, -477822072LL, 25000, 24126641700000LL);
  check_local(30670713789766LL, -10174, 913517550LL, 1000, 30671315263000LL);
}

TEST_CASE("identity clock is the identity") {
  ClockModel c{0, {}, SimTime{1}};
  CHECK(c.local_time(sim_s(5)) == sim_s(5));
}

TEST_CASE("+20 ppm over one second is exactly 20 us") {
  ClockModel c{20'000, {}, SimTime{1}};
  CHECK(c.local_time(sim_s(1)) == sim_s(1) + sim_us(20));
}

TEST_CASE("-50 ppm with +3 ms offset at t=100 s") {
  ClockModel c{-50'000, sim_ms(3), sim_us(10)};
  CHECK(c.local_time(sim_s(100)).nanos == 99'998'000'000LL);
}

TEST_CASE("local_time is monotone non-decreasing") {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    ClockModel c{rng.uniform_i64(-900'000, 900'000),
                 SimTime{rng.uniform_i64(-1'000'000'000, 1'000'000'000)},
                 SimTime{rng.uniform_i64(1, 50'000)}};
    SimTime prev = c.local_time(SimTime{0});
    SimTime t{0};
    for (int i = 0; i < 200; ++i) {
      t += SimTime{rng.uniform_i64(0, 100'000)};
      SimTime cur = c.local_time(t);
      CHECK(cur >= prev);
      prev = cur;
    }
  }
}

TEST_CASE("true_time_of_local finds the earliest matching instant") {
  Rng rng(78);
  for (int trial = 0; trial < 50; ++trial) {
    ClockModel c{rng.uniform_i64(-900'000, 900'000),
                 SimTime{rng.uniform_i64(-1'000'000'000, 1'000'000'000)},
                 SimTime{rng.uniform_i64(1, 50'000)}};
    for (int i = 0; i < 40; ++i) {
      SimTime target{rng.uniform_i64(0, 4'000'000'000'000LL)};
      SimTime t = c.true_time_of_local(target);
      CHECK(c.local_time(t) >= target);
      CHECK(c.local_time(t - SimTime{1}) < target);
    }
  }
}

TEST_CASE("jitter none adds exactly zero") {
  Rng rng(5);
  JitterModel m;
  for (int i = 0; i < 10; ++i) CHECK(m.sample(rng) == SimTime{});
}

TEST_CASE("uniform jitter stays inside its half width") {
  Rng rng(6);
  JitterModel m{JitterModel::Kind::uniform, sim_ms(5), {}};
  for (int i = 0; i < 5000; ++i) {
    SimTime s = m.sample(rng);
    CHECK(s >= -sim_ms(5));
    CHECK(s <= sim_ms(5));
  }
}

TEST_CASE("seeded sampling reproduces bit-identically") {
  JitterModel m{JitterModel::Kind::gaussian, {}, sim_ms(2)};
  Rng a(99), b(99);
  for (int i = 0; i < 100; ++i) CHECK(m.sample(a) == m.sample(b));
}
