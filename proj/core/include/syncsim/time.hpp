// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>

namespace syncsim {

// Signed nanoseconds since the simulation epoch. Time values never touch
// floating point; every operation on SimTime is exact integer arithmetic.
struct SimTime {
  int64_t nanos{0};

  constexpr auto operator<=>(const SimTime&) const = default;

  constexpr SimTime operator+(SimTime o) const { return {nanos + o.nanos}; }
  constexpr SimTime operator-(SimTime o) const { return {nanos - o.nanos}; }
  constexpr SimTime operator-() const { return {-nanos}; }
  constexpr SimTime& operator+=(SimTime o) {
    nanos += o.nanos;
    return *this;
  }
  constexpr SimTime& operator-=(SimTime o) {
    nanos -= o.nanos;
    return *this;
  }
  constexpr SimTime operator*(int64_t k) const { return {nanos * k}; }

  constexpr double to_seconds() const { return double(nanos) * 1e-9; }
};

constexpr SimTime sim_ns(int64_t v) { return {v}; }
constexpr SimTime sim_us(int64_t v) { return {v * 1'000}; }
constexpr SimTime sim_ms(int64_t v) { return {v * 1'000'000}; }
constexpr SimTime sim_s(int64_t v) { return {v * 1'000'000'000}; }

// Floor division (rounds toward negative infinity for any sign mix).
constexpr int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Largest multiple of `quantum` not greater than t. quantum must be > 0.
constexpr SimTime quantize_floor(SimTime t, SimTime quantum) {
  return {floor_div(t.nanos, quantum.nanos) * quantum.nanos};
}

// Smallest multiple of `quantum` not less than t.
constexpr SimTime quantize_ceil(SimTime t, SimTime quantum) {
  return {-floor_div(-t.nanos, quantum.nanos) * quantum.nanos};
}

// Half of a non-negative duration, rounded half-to-even. Used wherever the
// protocol needs (b - a) / 2 on integer nanoseconds; the tie rule is part of
// the wire contract and tests assert it.
constexpr SimTime half_round_even(SimTime d) {
  int64_t q = d.nanos / 2;
  if ((d.nanos % 2) != 0 && (q & 1) != 0) ++q;
  return {q};
}

}  // namespace syncsim
