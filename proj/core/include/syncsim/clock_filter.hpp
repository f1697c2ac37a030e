// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "syncsim/time.hpp"

namespace syncsim {

// One host-time request/answer exchange, as captured by the slave device.
// t_slave_request / t_slave_answer are slave-clock readings taken when the
// request left and when the answer arrived; t_host_answer is the host-clock
// stamp carried in the answer.
struct TimeRequestSample {
  SimTime t_slave_request{};
  SimTime t_slave_answer{};
  SimTime t_host_answer{};
};

// Two-state clock translation filter: offset `delta` (nanoseconds past the
// fixed connection offset) and dimensionless skew `eta`, with covariance
//
//   P = [ p00 p01 ]   units: ns^2, ns, 1
//       [ p01 p11 ]
//
// Covariance math runs in double precision on nanosecond-scaled values;
// rounding back to integer nanoseconds happens only at translate() and in the
// reported residual/innovation. `initial_offset` is the connection-time host
// minus slave clock difference and never changes after initialization.
struct FilterState {
  double delta_ns{0.0};
  double eta{0.0};
  double p00{0.0};
  double p01{0.0};
  double p11{0.0};
  SimTime initial_offset{};
  SimTime last_update_slave{};
};

struct FilterNoise {
  double q_delta_ns2;  // offset process noise variance per update, ns^2
  double q_eta2;       // skew process noise variance per update
  double r_ns2;        // measurement noise variance, ns^2

  static FilterNoise defaults();
};

struct FilterInit {
  double p0_delta_ns2;  // initial offset variance, ns^2
  double p0_eta2;       // initial skew variance

  static FilterInit defaults();
};

struct FilterUpdate {
  FilterState state;
  SimTime residual;          // measurement minus predicted host time
  SimTime innovation_delta;  // correction applied to delta
  double innovation_eta;     // correction applied to eta
};

// Host time the exchange measured, corrected by half the round trip:
// t_host_answer - (t_slave_answer - t_slave_request) / 2, the half rounded
// half-to-even. Under a symmetric link this is the host clock reading at the
// instant the request left the slave.
SimTime measured_host_time(const TimeRequestSample& sample);

// Captures the connection offset from the first exchange and seeds the state
// with delta = 0, eta = 0, P = diag(p0).
FilterState initial_filter_state(const TimeRequestSample& first,
                                 const FilterInit& init);

// Propagate state and covariance to t_slave_now:
//   delta += dt * eta,  P = F P F^T + Q  with  F = [[1, dt], [0, 1]].
// Throws NonMonotoneTimeError if t_slave_now precedes the last update.
FilterState predict(FilterState state, const FilterNoise& noise,
                    SimTime t_slave_now);

// Predict to the answer time, then correct with the measured host time.
// The measurement refers to the instant the request left the slave, so the
// residual subtracts t_slave_request; subtracting the answer time instead
// would push the whole round trip into the offset estimate.
FilterUpdate update(FilterState state, const FilterNoise& noise,
                    const TimeRequestSample& sample);

// Slave-to-host translation with the current state:
//   t_host = t_slave + dt * eta + delta + initial_offset,
// dt measured from the last update instant.
SimTime translate(const FilterState& state, SimTime t_slave);

}  // namespace syncsim
