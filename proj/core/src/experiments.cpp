// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#include "syncsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "syncsim/errors.hpp"
#include "syncsim/led_board.hpp"
#include "syncsim/pipeline.hpp"

namespace syncsim {

ArtifactSink::ArtifactSink(std::string dir, std::string provenance)
    : dir_(std::move(dir)), provenance_(std::move(provenance)) {
  if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

std::unique_ptr<CsvWriter> ArtifactSink::csv(
    const std::string& name, const std::vector<std::string>& columns) const {
  if (!enabled()) return nullptr;
  return std::make_unique<CsvWriter>(dir_ + "/" + name, columns, provenance_);
}

namespace {

// Frame-level view used by the LED analysis.
struct LedFrame {
  SimTime t_start;
  SimTime t_end;
  std::vector<VisibleState> states;  // dwells >= threshold only
  int count;
  int striding;
};

std::string states_text(const std::vector<VisibleState>& states) {
  std::ostringstream os;
  for (size_t i = 0; i < states.size(); ++i) {
    if (i) os << '|';
    os << states[i].count;
  }
  return os.str();
}

}  // namespace

ExperimentReport run_led_experiment(const ScenarioConfig& cfg,
                                    const ArtifactSink& sink) {
  if (cfg.cameras.size() != 2) {
    throw ConfigError("LED experiment needs exactly two cameras");
  }
  const int64_t k_inc =
      cfg.led.board_rate_hz * cfg.cameras.front().channel.period.nanos /
      1'000'000'000;
  Pipeline pipe(cfg);

  const SimTime board_period{1'000'000'000 / cfg.led.board_rate_hz};
  LedTimingBoard led(cfg.slave_clock, board_period, board_period);

  const int id0 = cfg.cameras[0].channel.id;
  const int id1 = cfg.cameras[1].channel.id;
  const size_t wanted = size_t(cfg.led.pairs) + 1;
  SimTime horizon = sim_s(2);
  while (pipe.truth().exposures(id0).size() < wanted ||
         pipe.truth().exposures(id1).size() < wanted) {
    pipe.run_until(horizon);
    horizon += sim_s(2);
    if (horizon > sim_s(24 * 3600)) {
      throw SimError("LED experiment produced no frames; check trigger config");
    }
  }
  pipe.finish();

  auto frames_of = [&](int cam_id) {
    std::vector<LedFrame> frames;
    for (const auto& e : pipe.truth().exposures(cam_id)) {
      if (e.spurious || !e.complete) continue;
      LedFrame f;
      f.t_start = e.t_start;
      f.t_end = e.t_end;
      SimTime min_dwell{int64_t(double((e.t_end - e.t_start).nanos) *
                                cfg.led.dwell_threshold_frac)};
      for (const auto& s : led.visible_states(e.t_start, e.t_end)) {
        if (s.dwell >= min_dwell) f.states.push_back(s);
      }
      f.count = dominant_count(f.states);
      f.striding = striding_led_count(f.states, min_dwell);
      frames.push_back(f);
      if (frames.size() == size_t(cfg.led.pairs)) break;
    }
    return frames;
  };
  std::vector<LedFrame> left = frames_of(id0);
  std::vector<LedFrame> right = frames_of(id1);
  size_t pairs = std::min(left.size(), right.size());

  int64_t mismatches = 0;
  int64_t wrong_increments = 0;
  int64_t over_striding = 0;
  int max_striding = 0;
  auto csv = sink.csv("led_frames.csv",
                      {"pair", "camera", "t_start_ns", "t_end_ns", "count",
                       "striding_leds", "states"});
  for (size_t i = 0; i < pairs; ++i) {
    const LedFrame& a = left[i];
    const LedFrame& b = right[i];
    bool same = a.states.size() == b.states.size();
    if (same) {
      for (size_t s = 0; s < a.states.size(); ++s) {
        same = same && a.states[s].count == b.states[s].count;
      }
    }
    if (!same) ++mismatches;
    for (const LedFrame* f : {&a, &b}) {
      max_striding = std::max(max_striding, f->striding);
      if (f->striding > 2) ++over_striding;
    }
    if (i > 0) {
      for (auto [prev, cur] : {std::pair{&left[i - 1], &a},
                               std::pair{&right[i - 1], &b}}) {
        int64_t got = (int64_t(cur->count) - int64_t(prev->count) +
                       kLedCounterModulus * 8) %
                      kLedCounterModulus;
        if (got != k_inc % kLedCounterModulus) ++wrong_increments;
      }
    }
    if (csv) {
      csv->row({int64_t(i), id0, a.t_start.nanos, a.t_end.nanos, a.count,
                a.striding, states_text(a.states)});
      csv->row({int64_t(i), id1, b.t_start.nanos, b.t_end.nanos, b.count,
                b.striding, states_text(b.states)});
    }
  }
  if (csv) csv->close();

  ExperimentReport rep;
  rep.name = "led";
  rep.metrics["pairs_checked"] = double(pairs);
  rep.metrics["mismatched_pairs"] = double(mismatches);
  rep.metrics["wrong_increments"] = double(wrong_increments);
  rep.metrics["frames_over_two_striding"] = double(over_striding);
  rep.metrics["max_striding_leds"] = double(max_striding);
  rep.metrics["expected_increment"] = double(k_inc);
  return rep;
}

namespace {

// True filter-model skew between slave and host clocks: d(host)/d(slave) - 1.
double true_relative_skew(const ClockModel& host, const ClockModel& slave) {
  return (1e9 + double(host.skew_ppb)) / (1e9 + double(slave.skew_ppb)) - 1.0;
}

}  // namespace

ExperimentReport run_ekf_experiment(const ScenarioConfig& cfg,
                                    const ArtifactSink& sink) {
  if (!cfg.filter.enabled) {
    throw ConfigError("EKF experiment requires filter.enabled");
  }
  Pipeline pipe(cfg);
  SimTime boot_reading = cfg.slave_clock.local_time(SimTime{});
  SimTime connect_true = cfg.slave_clock.true_time_of_local(
      boot_reading + cfg.filter.connect_at_slave);
  pipe.run_until(connect_true + cfg.ekf.duration + sim_s(2));
  pipe.finish();

  const FilterState* st = pipe.board().filter_state();
  if (!st || pipe.ekf_log.empty()) {
    throw SimError("EKF experiment produced no filter updates");
  }
  const SimTime delta0 = st->initial_offset;

  // Convergence: the first instant by which the residual has stayed inside
  // the gate for `convergence_window` consecutive updates.
  int consecutive = 0;
  size_t converged_at = SIZE_MAX;
  for (size_t i = 0; i < pipe.ekf_log.size(); ++i) {
    const auto& row = pipe.ekf_log[i];
    if (std::llabs(row.result.residual.nanos) < cfg.ekf.residual_gate.nanos) {
      if (++consecutive >= cfg.ekf.convergence_window &&
          converged_at == SIZE_MAX) {
        converged_at = i;
      }
    } else {
      consecutive = 0;
      if (converged_at == SIZE_MAX) continue;
    }
  }
  bool converged = converged_at != SIZE_MAX;
  double convergence_time_s =
      converged ? (pipe.ekf_log[converged_at].t_request_true -
                   pipe.filter_init_true)
                      .to_seconds()
                : -1.0;

  int64_t post = 0, post_res_ok = 0, post_innov_ok = 0;
  double max_delta_err_ns = 0.0;
  auto csv = sink.csv(
      "ekf_updates.csv",
      {"k", "t_request_true_ns", "t_slave_request_ns", "t_slave_answer_ns",
       "residual_ns", "innovation_delta_ns", "innovation_eta", "delta_ns",
       "eta", "p00", "p01", "p11", "delta_true_ns"});
  for (size_t i = 0; i < pipe.ekf_log.size(); ++i) {
    const auto& row = pipe.ekf_log[i];
    double delta_true =
        double((pipe.host_local(row.t_request_true) - delta0 -
                row.sample.t_slave_request)
                   .nanos);
    if (converged && i > converged_at) {
      ++post;
      if (std::llabs(row.result.residual.nanos) <= cfg.ekf.residual_gate.nanos)
        ++post_res_ok;
      if (std::llabs(row.result.innovation_delta.nanos) <=
          cfg.ekf.innovation_gate.nanos)
        ++post_innov_ok;
      max_delta_err_ns = std::max(
          max_delta_err_ns, std::abs(row.result.state.delta_ns - delta_true));
    }
    if (csv) {
      csv->row({int64_t(row.index), row.t_request_true.nanos,
                row.sample.t_slave_request.nanos, row.sample.t_slave_answer.nanos,
                row.result.residual.nanos, row.result.innovation_delta.nanos,
                row.result.innovation_eta, row.result.state.delta_ns,
                row.result.state.eta, row.result.state.p00, row.result.state.p01,
                row.result.state.p11, delta_true});
    }
  }
  if (csv) csv->close();

  // Unfiltered drift: translate with the connection offset alone (zero
  // state) a full horizon out, against the true host clock.
  SimTime horizon_slave = cfg.filter.connect_at_slave + cfg.ekf.no_filter_horizon;
  SimTime horizon_true = cfg.slave_clock.true_time_of_local(horizon_slave);
  FilterState frozen;
  frozen.initial_offset = delta0;
  frozen.last_update_slave = cfg.filter.connect_at_slave;
  double no_filter_err_ns =
      std::abs(double((translate(frozen, horizon_slave) -
                       pipe.host_local(horizon_true))
                          .nanos));
  // Filtered error at the end of the simulated run.
  const auto& last = pipe.ekf_log.back();
  SimTime end_slave = last.sample.t_slave_answer;
  SimTime end_true = cfg.slave_clock.true_time_of_local(end_slave);
  double filtered_err_ns = std::abs(
      double((translate(*st, end_slave) - pipe.host_local(end_true)).nanos));

  ExperimentReport rep;
  rep.name = "ekf";
  rep.metrics["updates"] = double(pipe.ekf_log.size());
  rep.metrics["converged"] = converged ? 1.0 : 0.0;
  rep.metrics["convergence_time_s"] = convergence_time_s;
  rep.metrics["post_updates"] = double(post);
  rep.metrics["residual_within_gate_frac"] =
      post > 0 ? double(post_res_ok) / double(post) : 0.0;
  rep.metrics["innovation_within_gate_frac"] =
      post > 0 ? double(post_innov_ok) / double(post) : 0.0;
  rep.metrics["max_post_delta_error_ms"] = max_delta_err_ns / 1e6;
  rep.metrics["eta_estimate"] = st->eta;
  rep.metrics["eta_true"] =
      true_relative_skew(cfg.host_clock, cfg.slave_clock);
  rep.metrics["no_filter_drift_ms"] = no_filter_err_ns / 1e6;
  rep.metrics["filtered_error_ms"] = filtered_err_ns / 1e6;
  return rep;
}

ExperimentReport run_sync_study(const ScenarioConfig& cfg,
                                const ArtifactSink& sink) {
  Pipeline pipe(cfg);
  pipe.run_until(cfg.study.duration);
  pipe.finish();

  ExperimentReport rep;
  rep.name = "study";

  // Association startup outcome.
  bool all_init = true;
  for (const auto& cam : cfg.cameras) {
    if (!pipe.sync().camera_initialized(cam.channel.id)) all_init = false;
  }
  rep.metrics["all_cameras_initialized"] = all_init ? 1.0 : 0.0;

  // Filter convergence on the same detector the EKF experiment uses.
  const SimTime gate = sim_ms(5);
  const int window = 30;
  int consecutive = 0;
  SimTime conv_true{INT64_MAX};
  bool converged = !cfg.filter.enabled;  // raw-output studies skip the gate
  for (const auto& row : pipe.ekf_log) {
    if (std::llabs(row.result.residual.nanos) < gate.nanos) {
      if (++consecutive >= window) {
        conv_true = row.t_request_true;
        converged = true;
        break;
      }
    } else {
      consecutive = 0;
    }
  }
  rep.metrics["converged"] = converged ? 1.0 : 0.0;

  SimTime metrics_start = converged && cfg.filter.enabled
                              ? conv_true + cfg.study.settle_margin
                              : SimTime{INT64_MAX};
  if (!cfg.filter.enabled) metrics_start = cfg.study.settle_margin;
  for (const auto& [cam, t] : pipe.init_confirm_true) {
    if (converged) metrics_start = std::max(metrics_start, t + cfg.study.settle_margin);
  }

  // Pairing correctness over the whole run, not just the metric window.
  int64_t incorrect = 0;
  for (const auto& s : pipe.stamped_images) {
    uint64_t want = pipe.truth().payload_for_stamp(s.camera_id,
                                                   int64_t(s.board_seq));
    if (want == 0 || want != s.payload_id) ++incorrect;
  }
  rep.metrics["incorrect_pairings"] = double(incorrect);
  rep.metrics["stamped_images"] = double(pipe.stamped_images.size());

  // Ground-truth timestamp error per sensor, inside the metric window.
  auto csv = sink.csv("stamp_errors.csv",
                      {"sensor", "seq", "t_out_ns", "t_truth_ns", "error_ns",
                       "in_window"});
  double overall_max_ns = 0.0;
  std::map<std::string, std::pair<double, int64_t>> rms_acc;  // sum sq, n
  std::map<std::string, double> max_ns;
  auto account = [&](const std::string& sensor, int64_t seq, SimTime t_out,
                     SimTime t_truth, SimTime event_true) {
    double err = double((t_out - t_truth).nanos);
    bool in_window = event_true >= metrics_start;
    if (in_window) {
      overall_max_ns = std::max(overall_max_ns, std::abs(err));
      auto& [sq, n] = rms_acc[sensor];
      sq += err * err;
      ++n;
      max_ns[sensor] = std::max(max_ns[sensor], std::abs(err));
    }
    if (csv) {
      csv->row({sensor, seq, t_out.nanos, t_truth.nanos, err,
                int64_t(in_window ? 1 : 0)});
    }
  };
  for (const auto& s : pipe.stamped_images) {
    const ExposureTruth* e = pipe.truth().by_payload(s.payload_id);
    if (!e || !e->complete) continue;
    account("cam" + std::to_string(s.camera_id), int64_t(s.image_seq),
            s.t_image, pipe.host_local(e->mid()), e->mid());
  }
  const auto& imu_truth = pipe.truth().imu();
  for (const auto& r : pipe.imu_records) {
    if (r.seq < imu_truth.size() && imu_truth[r.seq].seq == r.seq) {
      const auto& t = imu_truth[r.seq];
      account("imu", int64_t(r.seq), r.t, pipe.host_local(t.t_true), t.t_true);
    }
  }
  if (csv) csv->close();

  int64_t window_samples = 0;
  for (const auto& [sensor, acc] : rms_acc) {
    rep.metrics["rms_error_us." + sensor] =
        std::sqrt(acc.first / double(acc.second)) / 1e3;
    rep.metrics["max_error_us." + sensor] = max_ns[sensor] / 1e3;
    rep.metrics["samples." + sensor] = double(acc.second);
    window_samples += acc.second;
  }
  rep.metrics["window_samples"] = double(window_samples);
  rep.metrics["max_abs_error_ms"] = overall_max_ns / 1e6;

  // Exposure-compensation regularity on the slave timeline. For every
  // full-rate frame the stamp's deviation from its grid target must equal
  // half the exposure change since the previous frame, up to timer
  // quantization; spacing deviations combine two such terms.
  const int64_t q = cfg.slave_clock.tick_quantum.nanos;
  double max_identity_residual_ns = 0.0;
  double max_spacing_excess_ns = 0.0;
  std::map<int, std::vector<const StampRecord*>> normal_frames;
  for (const auto& recd : pipe.stamp_records) {
    if (!recd.info.slow && recd.info.exposure.nanos > 0) {
      normal_frames[recd.msg.camera_id].push_back(&recd);
    }
  }
  std::map<int, std::pair<int64_t, int64_t>> dev_range;  // camera -> min,max
  std::map<int, std::pair<int64_t, int64_t>> e_range;
  auto frames_csv = sink.csv("frames.csv",
                             {"camera", "seq", "stamp_ns", "grid_ns",
                              "exposure_ns", "prev_exposure_ns", "clamped"});
  for (auto& [cam_id, frames] : normal_frames) {
    bool compensated = true;
    for (const auto& c : cfg.cameras) {
      if (c.channel.id == cam_id) compensated = c.channel.compensation;
    }
    for (size_t i = 0; i < frames.size(); ++i) {
      const StampInfo& info = frames[i]->info;
      int64_t dev = (info.stamp - info.grid).nanos;
      if (frames_csv) {
        frames_csv->row({cam_id, int64_t(info.seq), info.stamp.nanos,
                         info.grid.nanos, info.exposure.nanos,
                         info.prev_exposure.nanos,
                         int64_t(info.clamped ? 1 : 0)});
      }
      auto& dr = dev_range.try_emplace(cam_id, dev, dev).first->second;
      dr.first = std::min(dr.first, dev);
      dr.second = std::max(dr.second, dev);
      auto& er = e_range
                     .try_emplace(cam_id, info.exposure.nanos,
                                  info.exposure.nanos)
                     .first->second;
      er.first = std::min(er.first, info.exposure.nanos);
      er.second = std::max(er.second, info.exposure.nanos);
      if (compensated && info.prev_exposure.nanos > 0 && !info.clamped) {
        double identity =
            std::abs(double(dev) -
                     double(info.exposure.nanos - info.prev_exposure.nanos) / 2.0);
        max_identity_residual_ns =
            std::max(max_identity_residual_ns, identity);
      }
      if (i > 0) {
        const StampInfo& prev = frames[i - 1]->info;
        int64_t period = (info.grid - prev.grid).nanos;
        if (period > 0 && compensated && info.prev_exposure.nanos > 0 &&
            prev.prev_exposure.nanos > 0) {
          double spacing_dev =
              std::abs(double((info.stamp - prev.stamp).nanos - period));
          double bound =
              std::abs(double(info.exposure.nanos - info.prev_exposure.nanos)) /
                  2.0 +
              std::abs(double(prev.exposure.nanos - prev.prev_exposure.nanos)) /
                  2.0;
          max_spacing_excess_ns =
              std::max(max_spacing_excess_ns, spacing_dev - bound);
        }
      }
    }
  }
  if (frames_csv) frames_csv->close();
  rep.metrics["max_identity_residual_ns"] = max_identity_residual_ns;
  rep.metrics["identity_bound_ns"] = double(2 * q);
  rep.metrics["max_spacing_excess_ns"] = max_spacing_excess_ns;
  // Grid-deviation swing vs half the observed exposure swing, per camera.
  double max_swing_mismatch_ns = 0.0;
  double max_swing_ns = 0.0;
  for (const auto& [cam_id, dr] : dev_range) {
    const auto& er = e_range[cam_id];
    double swing = double(dr.second - dr.first);
    double half_e_swing = double(er.second - er.first) / 2.0;
    max_swing_ns = std::max(max_swing_ns, swing);
    max_swing_mismatch_ns =
        std::max(max_swing_mismatch_ns, std::abs(swing - half_e_swing));
  }
  rep.metrics["grid_dev_swing_ns"] = max_swing_ns;
  rep.metrics["swing_vs_half_exposure_swing_ns"] = max_swing_mismatch_ns;

  // Diagnostics roll-up.
  int64_t missing = 0, gaps = 0, evicted = 0;
  for (const auto& d : pipe.sync().diagnostics) {
    if (d.kind == DiagnosticKind::missing_stamp) ++missing;
    if (d.kind == DiagnosticKind::seq_gap) ++gaps;
    if (d.kind == DiagnosticKind::stamp_evicted) ++evicted;
  }
  rep.metrics["missing_stamp_quarantines"] = double(missing);
  rep.metrics["imu_seq_gaps"] = double(gaps);
  rep.metrics["stamps_evicted"] = double(evicted);
  return rep;
}

ExperimentReport run_assoc_stress(const ScenarioConfig& cfg,
                                  const ArtifactSink& sink) {
  Rng master(Rng::derive(cfg.seed, "stress.offsets"));
  int64_t incorrect = 0;
  int64_t recovery_failures = 0;
  int64_t runs_done = 0;
  int64_t total_emitted = 0;
  int64_t total_quarantined = 0;
  int64_t init_failures = 0;

  auto csv = sink.csv("stress_runs.csv",
                      {"run", "offset", "recovered", "emitted", "quarantined",
                       "dropped_stamps", "dropped_images", "ok"});
  for (int r = 0; r < cfg.stress.runs; ++r) {
    int offset = int(master.uniform_i64(-cfg.stress.offset_range,
                                        cfg.stress.offset_range));
    ScenarioConfig run_cfg;
    run_cfg.name = cfg.name + "-run";
    run_cfg.seed = Rng::derive(cfg.seed, "stress.run." + std::to_string(r));
    run_cfg.slave_clock = cfg.slave_clock;
    run_cfg.host_clock = cfg.host_clock;
    run_cfg.filter.enabled = false;
    run_cfg.sync.translate_output = false;
    CameraScenario cam;
    cam.channel.id = 0;
    cam.channel.mode = CameraMode::independent;
    cam.channel.period = sim_ms(100);
    cam.channel.slow_period = sim_s(1);
    cam.device.exposure.kind = ExposurePolicy::Kind::fixed;
    cam.device.exposure.value = sim_ms(3);
    if (offset > 0) cam.device.spurious_startup_frames = offset;
    if (offset < 0) cam.device.drop_first_images = -offset;
    run_cfg.cameras.push_back(cam);
    run_cfg.sync.frame_period = cam.channel.period;
    run_cfg.sync.slow_period = cam.channel.slow_period;
    run_cfg.sync.match_threshold = SimTime{cam.channel.slow_period.nanos / 4};
    run_cfg.board_to_host.base_latency = sim_ms(5);
    run_cfg.board_to_host.jitter =
        JitterModel{JitterModel::Kind::uniform, sim_ms(5), {}};
    run_cfg.board_to_host.drop_prob = cfg.stress.stamp_drop_prob;
    run_cfg.host_to_board.base_latency = sim_ms(5);
    run_cfg.camera_to_host.base_latency = sim_ms(10);
    run_cfg.camera_to_host.jitter =
        JitterModel{JitterModel::Kind::uniform, sim_ms(4), {}};
    run_cfg.camera_to_host.drop_prob = cfg.stress.image_drop_prob;

    Pipeline pipe(run_cfg);
    SimTime horizon = sim_s(8);
    while (pipe.stamped_images.size() < size_t(cfg.stress.frames) &&
           horizon <= sim_s(60)) {
      pipe.run_until(horizon);
      horizon += sim_s(4);
      if (pipe.sync().camera_failed(0)) break;
    }
    pipe.finish();

    bool ok = true;
    if (pipe.sync().camera_failed(0) || !pipe.sync().camera_initialized(0)) {
      ++init_failures;
      ++recovery_failures;
      ok = false;
    } else if (pipe.sync().seq_offset(0) != offset) {
      ++recovery_failures;
      ok = false;
    }
    int64_t run_incorrect = 0;
    for (const auto& s : pipe.stamped_images) {
      uint64_t want =
          pipe.truth().payload_for_stamp(s.camera_id, int64_t(s.board_seq));
      if (want == 0 || want != s.payload_id) ++run_incorrect;
    }
    incorrect += run_incorrect;
    if (run_incorrect > 0) ok = false;
    int64_t quarantined = 0;
    for (const auto& d : pipe.sync().diagnostics) {
      if (d.kind == DiagnosticKind::missing_stamp) ++quarantined;
    }
    total_emitted += int64_t(pipe.stamped_images.size());
    total_quarantined += quarantined;
    ++runs_done;
    if (csv) {
      csv->row({int64_t(r), int64_t(offset),
                int64_t(pipe.sync().seq_offset(0)),
                int64_t(pipe.stamped_images.size()), quarantined,
                int64_t(0), int64_t(0), int64_t(ok ? 1 : 0)});
    }
  }
  if (csv) csv->close();

  ExperimentReport rep;
  rep.name = "stress";
  rep.metrics["runs_completed"] = double(runs_done);
  rep.metrics["incorrect_pairings"] = double(incorrect);
  rep.metrics["offset_recovery_failures"] = double(recovery_failures);
  rep.metrics["init_failures"] = double(init_failures);
  rep.metrics["total_emitted"] = double(total_emitted);
  rep.metrics["total_quarantined"] = double(total_quarantined);
  return rep;
}

}  // namespace syncsim
