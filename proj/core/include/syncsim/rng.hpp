// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "syncsim/time.hpp"

namespace syncsim {

// Deterministic random source. The engine (mt19937_64) is bit-specified by
// the standard; all derived samplers below are implemented by hand so that a
// given seed produces the same stream on every platform and toolchain.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() { return double(gen_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [lo, hi], inclusive. Rejection sampling, unbiased.
  int64_t uniform_i64(int64_t lo, int64_t hi) {
    uint64_t span = uint64_t(hi) - uint64_t(lo) + 1;
    if (span == 0) return int64_t(gen_());  // full 64-bit range
    uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return lo + int64_t(x % span);
  }

  // Uniform duration in [-half_width, +half_width].
  SimTime uniform_sym(SimTime half_width) {
    return {uniform_i64(-half_width.nanos, half_width.nanos)};
  }

  // Standard normal scaled by sigma, via Box-Muller with a cached spare.
  double gaussian(double sigma) {
    if (have_spare_) {
      have_spare_ = false;
      return spare_ * sigma;
    }
    double u1, u2;
    do {
      u1 = next_unit();
    } while (u1 <= 0.0);
    u2 = next_unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a) * sigma;
  }

  bool bernoulli(double p) { return next_unit() < p; }

  // Stable seed derivation: FNV-1a of the tag folded into the master seed
  // through splitmix64, so each component gets an independent stream.
  static uint64_t derive(uint64_t master, std::string_view tag) {
    uint64_t h = 1469598103934665603ull;
    for (char c : tag) {
      h ^= uint8_t(c);
      h *= 1099511628211ull;
    }
    uint64_t z = master ^ h;
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 gen_;
  double spare_{0.0};
  bool have_spare_{false};
};

}  // namespace syncsim
