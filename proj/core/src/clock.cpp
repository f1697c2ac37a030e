// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#include "syncsim/clock.hpp"

#include <cmath>

namespace syncsim {

namespace {

constexpr int64_t kGiga = 1'000'000'000;

// floor(a * b / c) on 128-bit intermediates; c > 0.
int64_t mul_floor_div(int64_t a, int64_t b, int64_t c) {
  __int128 p = __int128(a) * b;
  __int128 q = p / c;
  if (p % c != 0 && p < 0) --q;
  return int64_t(q);
}

// ceil(a * b / c); c > 0.
int64_t mul_ceil_div(int64_t a, int64_t b, int64_t c) {
  __int128 p = __int128(a) * b;
  __int128 q = p / c;
  if (p % c != 0 && p > 0) ++q;
  return int64_t(q);
}

}  // namespace

SimTime ClockModel::local_time(SimTime t_true) const {
  // initial_offset + floor(t * (1e9 + ppb) / 1e9), then timer quantization.
  int64_t raw =
      initial_offset.nanos + mul_floor_div(t_true.nanos, kGiga + skew_ppb, kGiga);
  return quantize_floor(SimTime{raw}, tick_quantum);
}

SimTime ClockModel::true_time_of_local(SimTime t_local) const {
  // A timer armed for t_local fires at the first tick whose reading reaches
  // t_local, i.e. raw(t) >= ceil(t_local to a quantum multiple).
  SimTime target = quantize_ceil(t_local, tick_quantum);
  int64_t m = target.nanos - initial_offset.nanos;
  // raw(t) >= m  <=>  floor(t*(G+p)/G) >= m  <=>  t >= ceil(m*G / (G+p)).
  return SimTime{mul_ceil_div(m, kGiga, kGiga + skew_ppb)};
}

SimTime JitterModel::sample(Rng& rng) const {
  switch (kind) {
    case Kind::none:
      return {};
    case Kind::uniform:
      return rng.uniform_sym(half_width);
    case Kind::gaussian:
      return {llround(rng.gaussian(double(sigma.nanos)))};
  }
  return {};
}

}  // namespace syncsim
