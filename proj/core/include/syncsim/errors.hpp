// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace syncsim {

struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scheduling an event before the current simulation time.
struct PastEventError : SimError {
  using SimError::SimError;
};

// A clock-filter operation was fed a slave timestamp older than the filter's
// last update instant.
struct NonMonotoneTimeError : SimError {
  using SimError::SimError;
};

// Two strobe edges of the same polarity in a row, or a falling edge with no
// matching rising edge.
struct ProtocolViolationError : SimError {
  using SimError::SimError;
};

struct ConfigError : SimError {
  using SimError::SimError;
};

// Sequence-offset candidates disagreed during association startup.
struct InitUnstableError : SimError {
  using SimError::SimError;
};

// No image/timestamp pair agreed within the allotted startup window.
struct InitTimeoutError : SimError {
  using SimError::SimError;
};

// A replay trace line did not parse; carries the 1-based line number.
struct TraceFormatError : SimError {
  TraceFormatError(size_t line_arg, const std::string& what)
      : SimError("trace line " + std::to_string(line_arg) + ": " + what),
        line(line_arg) {}
  size_t line;
};

}  // namespace syncsim
