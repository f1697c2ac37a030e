// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#include <cfenv>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "syncsim/clock.hpp"
#include "syncsim/clock_filter.hpp"
#include "syncsim/errors.hpp"
#include "syncsim/rng.hpp"

using namespace syncsim;

namespace {

// Smallest eigenvalue of the symmetric 2x2 [[p00, p01], [p01, p11]].
double min_eigenvalue(double p00, double p01, double p11) {
  double tr = p00 + p11;
  double det = p00 * p11 - p01 * p01;
  double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
  return (tr - disc) / 2.0;
}

double max_eigenvalue(double p00, double p01, double p11) {
  double tr = p00 + p11;
  double det = p00 * p11 - p01 * p01;
  double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
  return (tr + disc) / 2.0;
}

FilterState fresh_state(SimTime delta0 = {}, SimTime t0 = {}) {
  FilterState s;
  s.initial_offset = delta0;
  s.last_update_slave = t0;
  FilterInit init = FilterInit::defaults();
  s.p00 = init.p0_delta_ns2;
  s.p11 = init.p0_eta2;
  return s;
}

}  // namespace

TEST_CASE("measured host time subtracts half the round trip") {
  // 4 ms round trip -> 2 ms correction.
  TimeRequestSample s{sim_ms(10), sim_ms(14), sim_ms(1012)};
  CHECK(measured_host_time(s) == sim_ms(1010));
}

TEST_CASE("zero round trip leaves the host stamp unchanged") {
  TimeRequestSample s{sim_ms(3), sim_ms(3), sim_ms(999)};
  CHECK(measured_host_time(s) == sim_ms(999));
}

TEST_CASE("odd round trips round the half to even") {
  // Half of 3 ns is 1.5 -> 2 under the documented half-to-even rule.
  TimeRequestSample s{SimTime{0}, SimTime{3}, SimTime{1000}};
  CHECK(measured_host_time(s) == SimTime{998});
  // Exhaustive sweep against banker's rounding on doubles.
  std::fesetround(FE_TONEAREST);
  for (int64_t d = 0; d <= 400; ++d) {
    TimeRequestSample smp{SimTime{0}, SimTime{d}, SimTime{100'000}};
    int64_t expect = 100'000 - int64_t(std::rint(double(d) / 2.0));
    CHECK(measured_host_time(smp).nanos == expect);
  }
}

TEST_CASE("answer earlier than request is rejected") {
  TimeRequestSample s{sim_ms(5), sim_ms(4), sim_ms(100)};
  CHECK_THROWS_AS(measured_host_time(s), std::invalid_argument);
}

TEST_CASE("predict with dt=0 only adds process noise") {
  FilterNoise noise = FilterNoise::defaults();
  FilterState s = fresh_state();
  s.delta_ns = 123.0;
  s.eta = 4e-6;
  FilterState p = predict(s, noise, s.last_update_slave);
  CHECK(p.delta_ns == s.delta_ns);
  CHECK(p.eta == s.eta);
  CHECK(p.p00 == doctest::Approx(s.p00 + noise.q_delta_ns2));
  CHECK(p.p01 == s.p01);
  CHECK(p.p11 == doctest::Approx(s.p11 + noise.q_eta2));
}

TEST_CASE("predict integrates the skew into the offset") {
  // eta = 1e-5 over 1 s -> 10 us of offset.
  FilterState s = fresh_state();
  s.eta = 1e-5;
  FilterState p = predict(s, FilterNoise::defaults(), sim_s(1));
  CHECK(p.delta_ns == doctest::Approx(1e4).epsilon(1e-12));
}

TEST_CASE("predict refuses to move backwards") {
  FilterState s = fresh_state({}, sim_s(10));
  CHECK_THROWS_AS(predict(s, FilterNoise::defaults(), sim_s(9)),
                  NonMonotoneTimeError);
  TimeRequestSample smp{sim_s(9), sim_s(9), sim_s(9)};
  CHECK_THROWS_AS(update(s, FilterNoise::defaults(), smp),
                  NonMonotoneTimeError);
}

TEST_CASE("covariance stays symmetric PSD under random predict/update") {
  Rng rng(2024);
  FilterNoise noise = FilterNoise::defaults();
  FilterState s = fresh_state();
  SimTime t{};
  for (int i = 0; i < 2000; ++i) {
    t += SimTime{rng.uniform_i64(1'000, 2'000'000'000)};
    if (rng.bernoulli(0.5)) {
      s = predict(s, noise, t);
    } else {
      TimeRequestSample smp{t, t + SimTime{rng.uniform_i64(0, 20'000'000)},
                            t + SimTime{rng.uniform_i64(-10'000'000,
                                                        10'000'000)}};
      t = smp.t_slave_answer;
      s = update(s, noise, smp).state;
    }
    double lo = min_eigenvalue(s.p00, s.p01, s.p11);
    double hi = max_eigenvalue(s.p00, s.p01, s.p11);
    CHECK(lo >= -1e-12 * std::max(1.0, hi));
  }
}

namespace {

// Synthesizes zero-jitter exchanges between a skewed slave clock and an
// identity host clock, one per second on the slave grid.
struct PerfectLinkRun {
  std::vector<TimeRequestSample> samples;
  std::vector<double> measured_offsets;  // z - Delta - t_request, ns
  FilterState state;
  std::vector<SimTime> residuals;
};

PerfectLinkRun run_perfect_link(int64_t slave_ppb, int updates,
                                SimTime one_way = {}) {
  ClockModel slave{slave_ppb, sim_ms(300), sim_us(10)};
  ClockModel host{0, {}, SimTime{1}};
  auto make_sample = [&](SimTime t_slave_req) {
    SimTime tau = slave.true_time_of_local(t_slave_req);
    SimTime t_host = host.local_time(tau + one_way);
    SimTime t_ans = slave.local_time(tau + one_way + one_way);
    return TimeRequestSample{t_slave_req, t_ans, t_host};
  };
  PerfectLinkRun run;
  SimTime boot = slave.local_time({});
  SimTime t = boot + sim_ms(100);
  run.state = initial_filter_state(make_sample(t), FilterInit::defaults());
  FilterNoise noise = FilterNoise::defaults();
  for (int k = 1; k <= updates; ++k) {
    SimTime req = t + sim_s(1) * k;
    TimeRequestSample smp = make_sample(req);
    run.samples.push_back(smp);
    run.measured_offsets.push_back(
        double((measured_host_time(smp) - run.state.initial_offset - req).nanos));
    FilterUpdate upd = update(run.state, noise, smp);
    run.state = upd.state;
    run.residuals.push_back(upd.residual);
  }
  return run;
}

}  // namespace

TEST_CASE("perfect symmetric link: residual vanishes from the first update") {
  PerfectLinkRun run = run_perfect_link(0, 10, sim_ms(3));
  for (size_t i = 1; i < run.residuals.size(); ++i) {
    // Quantization of the slave readings leaves at most a tick of residue.
    CHECK(std::llabs(run.residuals[i].nanos) <= 10'000);
  }
}

TEST_CASE("skew estimate matches a least-squares line fit within 1%") {
  const int n = 600;
  PerfectLinkRun run = run_perfect_link(20'000, n, sim_ms(2));
  // Independent oracle: least-squares slope of measured offset vs slave time.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    double x = double(run.samples[i].t_slave_request.nanos);
    double y = run.measured_offsets[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double eta_true = 1e9 / (1e9 + 20'000.0) - 1.0;
  CHECK(slope == doctest::Approx(eta_true).epsilon(0.01));
  CHECK(run.state.eta == doctest::Approx(slope).epsilon(0.01));
}

TEST_CASE("translate with a fresh filter adds only the connection offset") {
  FilterState s = fresh_state(sim_ms(250), sim_s(1));
  CHECK(translate(s, sim_s(7)) == sim_s(7) + sim_ms(250));
}

TEST_CASE("translate applies a pure offset") {
  FilterState s = fresh_state({}, sim_s(1));
  s.delta_ns = 1e6;
  CHECK(translate(s, sim_s(2)) == sim_s(2) + sim_ms(1));
}

TEST_CASE("translate is affine between updates") {
  FilterState s = fresh_state(sim_ms(11), sim_s(1));
  s.delta_ns = 5.0e5;
  s.eta = 3.7e-6;
  Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    SimTime a{rng.uniform_i64(1'000'000'000, 3'000'000'000)};
    SimTime b = a + SimTime{2 * rng.uniform_i64(0, 1'000'000'000)};
    SimTime mid{(a.nanos + b.nanos) / 2};
    int64_t lhs = translate(s, a).nanos + translate(s, b).nanos;
    int64_t rhs = 2 * translate(s, mid).nanos;
    CHECK(std::llabs(lhs - rhs) <= 2);  // rounding of the two half corrections
  }
}

TEST_CASE("residuals under zero-mean jitter have zero empirical mean") {
  // Independent per-leg uniform delays; the midpoint correction cancels the
  // base, leaving triangular zero-mean measurement noise.
  ClockModel slave{20'000, sim_ms(300), sim_us(10)};
  ClockModel host{0, {}, SimTime{1}};
  Rng rng(4441);
  auto sample_at = [&](SimTime req) {
    SimTime d1 = sim_ms(5) + rng.uniform_sym(sim_ms(5));
    SimTime d2 = sim_ms(5) + rng.uniform_sym(sim_ms(5));
    SimTime tau = slave.true_time_of_local(req);
    return TimeRequestSample{req, slave.local_time(tau + d1 + d2),
                             host.local_time(tau + d1)};
  };
  SimTime t0 = slave.local_time({}) + sim_ms(100);
  FilterState s = initial_filter_state(sample_at(t0), FilterInit::defaults());
  FilterNoise noise = FilterNoise::defaults();
  const int kWarmup = 100, kCount = 400;
  std::vector<double> tail;
  for (int k = 1; k <= kWarmup + kCount; ++k) {
    FilterUpdate upd = update(s, noise, sample_at(t0 + sim_s(1) * k));
    s = upd.state;
    if (k > kWarmup) tail.push_back(double(upd.residual.nanos));
  }
  double mean = 0;
  for (double r : tail) mean += r;
  mean /= double(tail.size());
  double var = 0;
  for (double r : tail) var += (r - mean) * (r - mean);
  double sigma = std::sqrt(var / double(tail.size() - 1));
  CHECK(std::abs(mean) <= 3.0 * sigma / std::sqrt(double(tail.size())));
}
