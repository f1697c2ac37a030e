// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#include "syncsim/clock_filter.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "syncsim/errors.hpp"

namespace syncsim {

FilterNoise FilterNoise::defaults() {
  // Offset walk of 10 us per update, skew walk of 1e-8, and a measurement
  // variance matching a +/-5 ms uniform transport jitter band.
  return FilterNoise{
      .q_delta_ns2 = 1e4 * 1e4,
      .q_eta2 = 1e-8 * 1e-8,
      .r_ns2 = (5e6 * 5e6) / 3.0,
  };
}

FilterInit FilterInit::defaults() {
  // 100 ms offset sigma, 100 ppm skew sigma.
  return FilterInit{.p0_delta_ns2 = 1e8 * 1e8, .p0_eta2 = 1e-4 * 1e-4};
}

SimTime measured_host_time(const TimeRequestSample& sample) {
  if (sample.t_slave_answer < sample.t_slave_request) {
    throw std::invalid_argument("time request answered before it was sent");
  }
  return sample.t_host_answer -
         half_round_even(sample.t_slave_answer - sample.t_slave_request);
}

FilterState initial_filter_state(const TimeRequestSample& first,
                                 const FilterInit& init) {
  FilterState s;
  s.initial_offset = measured_host_time(first) - first.t_slave_request;
  s.last_update_slave = first.t_slave_answer;
  s.p00 = init.p0_delta_ns2;
  s.p11 = init.p0_eta2;
  return s;
}

FilterState predict(FilterState state, const FilterNoise& noise,
                    SimTime t_slave_now) {
  if (t_slave_now < state.last_update_slave) {
    throw NonMonotoneTimeError(
        "predict to t=" + std::to_string(t_slave_now.nanos) +
        "ns before last update t=" +
        std::to_string(state.last_update_slave.nanos) + "ns");
  }
  const double dt = double((t_slave_now - state.last_update_slave).nanos);
  state.delta_ns += dt * state.eta;
  const double p00 = state.p00 + 2.0 * dt * state.p01 + dt * dt * state.p11 +
                     noise.q_delta_ns2;
  const double p01 = state.p01 + dt * state.p11;
  const double p11 = state.p11 + noise.q_eta2;
  state.p00 = p00;
  state.p01 = p01;
  state.p11 = p11;
  state.last_update_slave = t_slave_now;
  return state;
}

FilterUpdate update(FilterState state, const FilterNoise& noise,
                    const TimeRequestSample& sample) {
  if (sample.t_slave_request < state.last_update_slave) {
    throw NonMonotoneTimeError("update sample older than last update");
  }
  FilterState s = predict(std::move(state), noise, sample.t_slave_answer);

  // Residual of the measured host time against the model at the request
  // instant. The subtraction is done in integers first so the double only
  // carries the small difference.
  const SimTime z = measured_host_time(sample);
  const double eps =
      double((z - s.initial_offset - sample.t_slave_request).nanos) -
      s.delta_ns;

  const double innov_var = s.p00 + noise.r_ns2;
  const double k0 = s.p00 / innov_var;
  const double k1 = s.p01 / innov_var;

  s.delta_ns += k0 * eps;
  s.eta += k1 * eps;

  // Joseph-form covariance update keeps P symmetric PSD under roundoff.
  // With H = [1 0]:  P' = (I-KH) P (I-KH)^T + K R K^T.
  const double a = 1.0 - k0;
  const double p00 = a * a * s.p00 + k0 * k0 * noise.r_ns2;
  const double p01 = a * (s.p01 - k1 * s.p00) + k0 * k1 * noise.r_ns2;
  const double p11 = k1 * k1 * s.p00 - 2.0 * k1 * s.p01 + s.p11 +
                     k1 * k1 * noise.r_ns2;
  s.p00 = p00;
  s.p01 = p01;
  s.p11 = p11;

  return FilterUpdate{
      .state = s,
      .residual = SimTime{llround(eps)},
      .innovation_delta = SimTime{llround(k0 * eps)},
      .innovation_eta = k1 * eps,
  };
}

SimTime translate(const FilterState& state, SimTime t_slave) {
  const double dt = double((t_slave - state.last_update_slave).nanos);
  const double correction = state.delta_ns + dt * state.eta;
  return t_slave + state.initial_offset + SimTime{llround(correction)};
}

}  // namespace syncsim
