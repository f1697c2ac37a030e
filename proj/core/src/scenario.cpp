// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#include "syncsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "syncsim/errors.hpp"

namespace syncsim {

using nlohmann::json;

namespace {

// Collects "path: message" validation errors while walking the document.
struct Ctx {
  std::vector<std::string>* errors;
  void fail(const std::string& path, const std::string& msg) {
    errors->push_back(path + ": " + msg);
  }
};

void check_keys(const json& j, const std::string& path,
                const std::set<std::string>& allowed, Ctx& ctx) {
  if (!j.is_object()) return;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.contains(it.key())) {
      ctx.fail(path.empty() ? it.key() : path + "." + it.key(),
               "unknown field");
    }
  }
}

double get_num(const json& j, const char* key, double def,
               const std::string& path, Ctx& ctx, double lo, double hi) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_number()) {
    ctx.fail(path + "." + key, "expected a number");
    return def;
  }
  double x = v.get<double>();
  if (x < lo || x > hi) {
    std::ostringstream os;
    os << "must be in [" << lo << ", " << hi << "]";
    ctx.fail(path + "." + key, os.str());
    return def;
  }
  return x;
}

int64_t get_int(const json& j, const char* key, int64_t def,
                const std::string& path, Ctx& ctx, int64_t lo, int64_t hi) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_number_integer()) {
    ctx.fail(path + "." + key, "expected an integer");
    return def;
  }
  int64_t x = v.get<int64_t>();
  if (x < lo || x > hi) {
    ctx.fail(path + "." + key,
             "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                 "]");
    return def;
  }
  return x;
}

bool get_bool(const json& j, const char* key, bool def,
              const std::string& path, Ctx& ctx) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_boolean()) {
    ctx.fail(path + "." + key, "expected true/false");
    return def;
  }
  return j.at(key).get<bool>();
}

std::string get_str(const json& j, const char* key, const std::string& def,
                    const std::string& path, Ctx& ctx) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_string()) {
    ctx.fail(path + "." + key, "expected a string");
    return def;
  }
  return j.at(key).get<std::string>();
}

SimTime ms(double v) { return SimTime{llround(v * 1e6)}; }
SimTime us(double v) { return SimTime{llround(v * 1e3)}; }
SimTime secs(double v) { return SimTime{llround(v * 1e9)}; }

ClockModel parse_clock(const json& j, const std::string& path, Ctx& ctx,
                       ClockModel def) {
  check_keys(j, path, {"skew_ppm", "offset_ms", "quantum_us"}, ctx);
  ClockModel c = def;
  c.skew_ppb = llround(
      get_num(j, "skew_ppm", double(def.skew_ppb) / 1e3, path, ctx, -1e4, 1e4) *
      1e3);
  c.initial_offset =
      ms(get_num(j, "offset_ms", def.initial_offset.to_seconds() * 1e3, path,
                 ctx, -1e9, 1e9));
  c.tick_quantum = us(get_num(j, "quantum_us",
                              double(def.tick_quantum.nanos) / 1e3, path, ctx,
                              0.001, 1e6));
  if (c.tick_quantum.nanos < 1) c.tick_quantum = SimTime{1};
  return c;
}

JitterModel parse_jitter(const json& j, const std::string& path, Ctx& ctx) {
  check_keys(j, path, {"kind", "half_width_ms", "sigma_ms"}, ctx);
  JitterModel m;
  std::string kind = get_str(j, "kind", "none", path, ctx);
  if (kind == "none") {
    m.kind = JitterModel::Kind::none;
  } else if (kind == "uniform") {
    m.kind = JitterModel::Kind::uniform;
    m.half_width = ms(get_num(j, "half_width_ms", 0.0, path, ctx, 0.0, 1e6));
  } else if (kind == "gaussian") {
    m.kind = JitterModel::Kind::gaussian;
    m.sigma = ms(get_num(j, "sigma_ms", 0.0, path, ctx, 0.0, 1e6));
  } else {
    ctx.fail(path + ".kind", "must be none|uniform|gaussian");
  }
  return m;
}

LinkScenario parse_link(const json& j, const std::string& path, Ctx& ctx,
                        LinkScenario def) {
  check_keys(j, path, {"base_ms", "jitter", "drop_prob"}, ctx);
  LinkScenario l = def;
  l.base_latency = ms(get_num(j, "base_ms",
                              def.base_latency.to_seconds() * 1e3, path, ctx,
                              0.0, 1e6));
  if (j.contains("jitter")) l.jitter = parse_jitter(j.at("jitter"), path + ".jitter", ctx);
  l.drop_prob = get_num(j, "drop_prob", def.drop_prob, path, ctx, 0.0, 1.0);
  return l;
}

CameraMode parse_mode(const std::string& s, const std::string& path,
                      Ctx& ctx) {
  if (s == "independent") return CameraMode::independent;
  if (s == "master") return CameraMode::master;
  if (s == "strobe_slave") return CameraMode::strobe_slave;
  if (s == "fixed_exposure") return CameraMode::fixed_exposure;
  ctx.fail(path + ".mode",
           "must be independent|master|strobe_slave|fixed_exposure");
  return CameraMode::independent;
}

CameraScenario parse_camera(const json& j, const std::string& path, Ctx& ctx) {
  check_keys(j, path,
             {"id", "mode", "master", "rate_hz", "exposure", "compensation",
              "start_initialized", "exposure_seed_ms", "trigger_line_delay_us",
              "strobe_line_delay_us", "readout_delay_ms", "slow_period_s",
              "spurious_startup_frames", "drop_first_images"},
             ctx);
  CameraScenario cam;
  int id = int(get_int(j, "id", 0, path, ctx, 0, 255));
  cam.channel.id = id;
  cam.device.id = id;
  cam.channel.mode =
      parse_mode(get_str(j, "mode", "independent", path, ctx), path, ctx);
  cam.channel.master_channel = int(get_int(j, "master", -1, path, ctx, -1, 255));
  double rate = get_num(j, "rate_hz", 10.0, path, ctx, 0.01, 10000.0);
  cam.channel.period = SimTime{llround(1e9 / rate)};
  cam.channel.compensation = get_bool(j, "compensation", true, path, ctx);
  cam.channel.start_initialized =
      get_bool(j, "start_initialized", false, path, ctx);
  cam.channel.exposure_seed =
      ms(get_num(j, "exposure_seed_ms", 0.0, path, ctx, 0.0, 1e4));
  cam.channel.slow_period =
      secs(get_num(j, "slow_period_s", 1.0, path, ctx, 0.01, 600.0));

  if (j.contains("exposure")) {
    const json& e = j.at("exposure");
    const std::string epath = path + ".exposure";
    check_keys(e, epath, {"policy", "value_ms", "min_ms", "max_ms", "step_frac"},
               ctx);
    std::string policy = get_str(e, "policy", "fixed", epath, ctx);
    if (policy == "fixed") {
      cam.device.exposure.kind = ExposurePolicy::Kind::fixed;
    } else if (policy == "auto") {
      cam.device.exposure.kind = ExposurePolicy::Kind::auto_walk;
    } else {
      ctx.fail(epath + ".policy", "must be fixed|auto");
    }
    cam.device.exposure.value = ms(get_num(e, "value_ms", 5.0, epath, ctx, 0.0, 1e4));
    cam.device.exposure.e_min = ms(get_num(e, "min_ms", 1.0, epath, ctx, 0.001, 1e4));
    cam.device.exposure.e_max = ms(get_num(e, "max_ms", 10.0, epath, ctx, 0.001, 1e4));
    cam.device.exposure.step_frac =
        get_num(e, "step_frac", 0.2, epath, ctx, 0.0, 1.0);
    if (cam.device.exposure.e_min > cam.device.exposure.e_max) {
      ctx.fail(epath, "min_ms must not exceed max_ms");
    }
  }
  if (cam.channel.mode == CameraMode::fixed_exposure) {
    cam.channel.fixed_exposure = cam.device.exposure.value;
    cam.device.emits_strobe = false;
  }
  if (cam.device.exposure.kind == ExposurePolicy::Kind::auto_walk) {
    int64_t lo = cam.device.exposure.e_min.nanos;
    int64_t hi = cam.device.exposure.e_max.nanos;
    if (cam.device.exposure.value.nanos < lo) cam.device.exposure.value = SimTime{lo};
    if (cam.device.exposure.value.nanos > hi) cam.device.exposure.value = SimTime{hi};
  }
  cam.trigger_line_delay =
      us(get_num(j, "trigger_line_delay_us", 0.0, path, ctx, 0.0, 1e7));
  cam.strobe_line_delay =
      us(get_num(j, "strobe_line_delay_us", 0.0, path, ctx, 0.0, 1e7));
  cam.device.readout_delay =
      ms(get_num(j, "readout_delay_ms", 2.0, path, ctx, 0.0, 1e4));
  cam.device.spurious_startup_frames =
      int(get_int(j, "spurious_startup_frames", 0, path, ctx, 0, 1000));
  cam.device.drop_first_images =
      int(get_int(j, "drop_first_images", 0, path, ctx, 0, 1000));
  // Exposure must fit inside the frame period for compensation to work.
  if (cam.device.exposure.e_max >= cam.channel.period &&
      cam.channel.mode != CameraMode::fixed_exposure) {
    ctx.fail(path, "exposure range does not fit inside the frame period");
  }
  return cam;
}

}  // namespace

std::optional<ScenarioConfig> scenario_from_json(
    const json& j, std::vector<std::string>* errors) {
  Ctx ctx{errors};
  ScenarioConfig cfg;
  if (!j.is_object()) {
    ctx.fail("", "top level must be an object");
    return std::nullopt;
  }
  check_keys(j, "",
             {"name", "description", "seed", "host_clock", "slave_clock",
              "board_start_slave_ms", "cameras", "imu", "links", "filter",
              "sync", "experiments", "checks", "output"},
             ctx);
  cfg.name = get_str(j, "name", "scenario", "", ctx);
  cfg.description = get_str(j, "description", "", "", ctx);
  cfg.seed = uint64_t(get_int(j, "seed", 1, "", ctx, 0, INT64_MAX));
  if (j.contains("host_clock"))
    cfg.host_clock = parse_clock(j.at("host_clock"), "host_clock", ctx,
                                 ClockModel{0, {}, sim_us(1)});
  if (j.contains("slave_clock"))
    cfg.slave_clock = parse_clock(j.at("slave_clock"), "slave_clock", ctx,
                                  ClockModel{0, {}, sim_us(10)});
  cfg.board_start_slave =
      ms(get_num(j, "board_start_slave_ms", 500.0, "", ctx, 0.0, 1e9));

  if (j.contains("cameras")) {
    const json& cams = j.at("cameras");
    if (!cams.is_array()) {
      ctx.fail("cameras", "expected an array");
    } else {
      int idx = 0;
      for (const auto& cj : cams) {
        cfg.cameras.push_back(
            parse_camera(cj, "cameras." + std::to_string(idx), ctx));
        ++idx;
      }
    }
  }
  std::set<int> ids;
  for (const auto& c : cfg.cameras) {
    if (!ids.insert(c.channel.id).second) {
      ctx.fail("cameras", "duplicate camera id " + std::to_string(c.channel.id));
    }
  }
  for (const auto& c : cfg.cameras) {
    if (c.channel.mode == CameraMode::strobe_slave) {
      if (!ids.contains(c.channel.master_channel)) {
        ctx.fail("cameras", "slave camera " + std::to_string(c.channel.id) +
                                " names unknown master " +
                                std::to_string(c.channel.master_channel));
      }
    }
  }

  if (j.contains("imu")) {
    const json& im = j.at("imu");
    check_keys(im, "imu", {"enabled", "rate_hz"}, ctx);
    cfg.imu_enabled = get_bool(im, "enabled", true, "imu", ctx);
    cfg.imu_rate_hz = get_int(im, "rate_hz", 200, "imu", ctx, 1, 100000);
  }

  if (j.contains("links")) {
    const json& links = j.at("links");
    check_keys(links, "links", {"board_to_host", "host_to_board", "camera_to_host"},
               ctx);
    if (links.contains("board_to_host"))
      cfg.board_to_host = parse_link(links.at("board_to_host"),
                                     "links.board_to_host", ctx, {});
    if (links.contains("host_to_board"))
      cfg.host_to_board = parse_link(links.at("host_to_board"),
                                     "links.host_to_board", ctx, {});
    if (links.contains("camera_to_host"))
      cfg.camera_to_host = parse_link(links.at("camera_to_host"),
                                      "links.camera_to_host", ctx, {});
  }

  if (j.contains("filter")) {
    const json& f = j.at("filter");
    check_keys(f, "filter",
               {"enabled", "update_period_s", "connect_at_slave_ms",
                "q_delta_stddev_us", "q_eta_stddev", "r_jitter_half_width_ms",
                "p0_delta_stddev_ms", "p0_eta_stddev"},
               ctx);
    cfg.filter.enabled = get_bool(f, "enabled", true, "filter", ctx);
    cfg.filter.update_period =
        secs(get_num(f, "update_period_s", 1.0, "filter", ctx, 0.001, 3600.0));
    cfg.filter.connect_at_slave =
        ms(get_num(f, "connect_at_slave_ms", 100.0, "filter", ctx, 0.0, 1e9));
    double qd_us = get_num(f, "q_delta_stddev_us", 10.0, "filter", ctx, 1e-6, 1e9);
    double qe = get_num(f, "q_eta_stddev", 1e-8, "filter", ctx, 0.0, 1.0);
    double r_hw_ms = get_num(f, "r_jitter_half_width_ms", 5.0, "filter", ctx,
                             1e-9, 1e6);
    double p0d_ms = get_num(f, "p0_delta_stddev_ms", 100.0, "filter", ctx,
                            1e-9, 1e9);
    double p0e = get_num(f, "p0_eta_stddev", 1e-4, "filter", ctx, 1e-12, 1.0);
    cfg.filter.noise.q_delta_ns2 = (qd_us * 1e3) * (qd_us * 1e3);
    cfg.filter.noise.q_eta2 = qe * qe;
    cfg.filter.noise.r_ns2 = (r_hw_ms * 1e6) * (r_hw_ms * 1e6) / 3.0;
    cfg.filter.init.p0_delta_ns2 = (p0d_ms * 1e6) * (p0d_ms * 1e6);
    cfg.filter.init.p0_eta2 = p0e * p0e;
    if (cfg.filter.noise.q_eta2 <= 0.0) {
      ctx.fail("filter.q_eta_stddev", "must be strictly positive");
    }
  }

  if (j.contains("sync")) {
    const json& s = j.at("sync");
    check_keys(s, "sync",
               {"match_threshold_ms", "init_window", "init_timeout_s",
                "missing_stamp_timeout_frames", "stamp_buffer_horizon_s",
                "translate_output"},
               ctx);
    cfg.sync.match_threshold =
        ms(get_num(s, "match_threshold_ms", 250.0, "sync", ctx, 0.001, 1e6));
    cfg.sync.init_window =
        int(get_int(s, "init_window", 3, "sync", ctx, 1, 1000));
    cfg.sync.init_timeout =
        secs(get_num(s, "init_timeout_s", 20.0, "sync", ctx, 0.1, 1e6));
    cfg.sync.missing_stamp_timeout_frames = int(
        get_int(s, "missing_stamp_timeout_frames", 2, "sync", ctx, 1, 1000));
    cfg.sync.stamp_buffer_horizon = secs(
        get_num(s, "stamp_buffer_horizon_s", 2.0, "sync", ctx, 0.01, 1e6));
    cfg.sync.translate_output =
        get_bool(s, "translate_output", true, "sync", ctx);
  }
  // Derived sync parameters follow the camera configuration.
  if (!cfg.cameras.empty()) {
    cfg.sync.frame_period = cfg.cameras.front().channel.period;
    cfg.sync.slow_period = cfg.cameras.front().channel.slow_period;
    if (!j.contains("sync") || !j.at("sync").contains("match_threshold_ms")) {
      cfg.sync.match_threshold =
          SimTime{cfg.sync.slow_period.nanos / 4};
    }
  }

  if (j.contains("experiments")) {
    const json& ex = j.at("experiments");
    check_keys(ex, "experiments", {"led", "ekf", "sync_study", "assoc_stress"},
               ctx);
    if (ex.contains("led")) {
      const json& e = ex.at("led");
      check_keys(e, "experiments.led",
                 {"pairs", "board_rate_hz", "dwell_threshold_frac"}, ctx);
      cfg.led.enabled = true;
      cfg.led.pairs =
          int(get_int(e, "pairs", 400, "experiments.led", ctx, 1, 1000000));
      cfg.led.board_rate_hz =
          get_int(e, "board_rate_hz", 1000, "experiments.led", ctx, 1, 1000000);
      cfg.led.dwell_threshold_frac = get_num(e, "dwell_threshold_frac", 0.01,
                                             "experiments.led", ctx, 0.0, 0.5);
      if (cfg.cameras.size() != 2) {
        ctx.fail("experiments.led", "needs exactly two cameras");
      } else {
        double fc = 1e9 / double(cfg.cameras.front().channel.period.nanos);
        double ratio = double(cfg.led.board_rate_hz) / fc;
        if (std::abs(ratio - std::round(ratio)) > 1e-9) {
          ctx.fail("experiments.led",
                   "board_rate_hz must be an integer multiple of the camera rate");
        }
      }
    }
    if (ex.contains("ekf")) {
      const json& e = ex.at("ekf");
      check_keys(e, "experiments.ekf",
                 {"duration_s", "residual_gate_ms", "convergence_window",
                  "innovation_gate_ms", "no_filter_horizon_s"},
                 ctx);
      cfg.ekf.enabled = true;
      cfg.ekf.duration =
          secs(get_num(e, "duration_s", 600.0, "experiments.ekf", ctx, 1.0, 1e6));
      cfg.ekf.residual_gate = ms(
          get_num(e, "residual_gate_ms", 5.0, "experiments.ekf", ctx, 0.001, 1e4));
      cfg.ekf.convergence_window = int(
          get_int(e, "convergence_window", 30, "experiments.ekf", ctx, 1, 1e5));
      cfg.ekf.innovation_gate = ms(get_num(e, "innovation_gate_ms", 0.2,
                                           "experiments.ekf", ctx, 1e-6, 1e4));
      cfg.ekf.no_filter_horizon = secs(get_num(
          e, "no_filter_horizon_s", 3600.0, "experiments.ekf", ctx, 1.0, 1e7));
    }
    if (ex.contains("sync_study")) {
      const json& e = ex.at("sync_study");
      check_keys(e, "experiments.sync_study", {"duration_s", "settle_margin_s"},
                 ctx);
      cfg.study.enabled = true;
      cfg.study.duration = secs(get_num(e, "duration_s", 600.0,
                                        "experiments.sync_study", ctx, 1.0, 1e6));
      cfg.study.settle_margin = secs(get_num(
          e, "settle_margin_s", 30.0, "experiments.sync_study", ctx, 0.0, 1e5));
      if (cfg.cameras.empty()) {
        ctx.fail("experiments.sync_study", "needs at least one camera");
      }
    }
    if (ex.contains("assoc_stress")) {
      const json& e = ex.at("assoc_stress");
      check_keys(e, "experiments.assoc_stress",
                 {"runs", "frames", "offset_range", "stamp_drop_prob",
                  "image_drop_prob"},
                 ctx);
      cfg.stress.enabled = true;
      cfg.stress.runs = int(
          get_int(e, "runs", 1000, "experiments.assoc_stress", ctx, 1, 100000));
      cfg.stress.frames = int(
          get_int(e, "frames", 30, "experiments.assoc_stress", ctx, 5, 10000));
      cfg.stress.offset_range = int(get_int(e, "offset_range", 10,
                                            "experiments.assoc_stress", ctx, 0,
                                            100));
      cfg.stress.stamp_drop_prob =
          get_num(e, "stamp_drop_prob", 0.03, "experiments.assoc_stress", ctx,
                  0.0, 0.5);
      cfg.stress.image_drop_prob =
          get_num(e, "image_drop_prob", 0.03, "experiments.assoc_stress", ctx,
                  0.0, 0.5);
    }
  }

  if (j.contains("checks")) {
    const json& cs = j.at("checks");
    if (!cs.is_array()) {
      ctx.fail("checks", "expected an array");
    } else {
      int idx = 0;
      for (const auto& cj : cs) {
        const std::string path = "checks." + std::to_string(idx);
        check_keys(cj, path, {"metric", "op", "value"}, ctx);
        CheckSpec spec;
        spec.metric = get_str(cj, "metric", "", path, ctx);
        spec.op = get_str(cj, "op", "==", path, ctx);
        spec.value = get_num(cj, "value", 0.0, path, ctx, -1e18, 1e18);
        if (spec.metric.empty()) ctx.fail(path + ".metric", "required");
        static const std::set<std::string> ops{"==", "!=", "<=", ">=", "<", ">"};
        if (!ops.contains(spec.op)) ctx.fail(path + ".op", "unknown operator");
        cfg.checks.push_back(spec);
        ++idx;
      }
    }
  }

  if (j.contains("output")) {
    const json& o = j.at("output");
    check_keys(o, "output", {"message_trace", "edge_trace"}, ctx);
    cfg.write_message_trace = get_bool(o, "message_trace", false, "output", ctx);
    cfg.write_edge_trace = get_bool(o, "edge_trace", false, "output", ctx);
  }

  if (!errors->empty()) return std::nullopt;
  return cfg;
}

namespace {

json clock_to_json(const ClockModel& c) {
  return json{{"skew_ppm", double(c.skew_ppb) / 1e3},
              {"offset_ms", double(c.initial_offset.nanos) / 1e6},
              {"quantum_us", double(c.tick_quantum.nanos) / 1e3}};
}

json jitter_to_json(const JitterModel& m) {
  switch (m.kind) {
    case JitterModel::Kind::none:
      return json{{"kind", "none"}};
    case JitterModel::Kind::uniform:
      return json{{"kind", "uniform"},
                  {"half_width_ms", double(m.half_width.nanos) / 1e6}};
    case JitterModel::Kind::gaussian:
      return json{{"kind", "gaussian"},
                  {"sigma_ms", double(m.sigma.nanos) / 1e6}};
  }
  return {};
}

json link_to_json(const LinkScenario& l) {
  return json{{"base_ms", double(l.base_latency.nanos) / 1e6},
              {"jitter", jitter_to_json(l.jitter)},
              {"drop_prob", l.drop_prob}};
}

const char* mode_name(CameraMode m) {
  switch (m) {
    case CameraMode::independent:
      return "independent";
    case CameraMode::master:
      return "master";
    case CameraMode::strobe_slave:
      return "strobe_slave";
    case CameraMode::fixed_exposure:
      return "fixed_exposure";
  }
  return "?";
}

}  // namespace

json scenario_to_json(const ScenarioConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["description"] = cfg.description;
  j["seed"] = cfg.seed;
  j["host_clock"] = clock_to_json(cfg.host_clock);
  j["slave_clock"] = clock_to_json(cfg.slave_clock);
  j["board_start_slave_ms"] = double(cfg.board_start_slave.nanos) / 1e6;
  j["cameras"] = json::array();
  for (const auto& cam : cfg.cameras) {
    json cj;
    cj["id"] = cam.channel.id;
    cj["mode"] = mode_name(cam.channel.mode);
    cj["master"] = cam.channel.master_channel;
    cj["rate_hz"] = 1e9 / double(cam.channel.period.nanos);
    cj["exposure"] = json{
        {"policy", cam.device.exposure.kind == ExposurePolicy::Kind::fixed
                       ? "fixed"
                       : "auto"},
        {"value_ms", double(cam.device.exposure.value.nanos) / 1e6},
        {"min_ms", double(cam.device.exposure.e_min.nanos) / 1e6},
        {"max_ms", double(cam.device.exposure.e_max.nanos) / 1e6},
        {"step_frac", cam.device.exposure.step_frac}};
    cj["compensation"] = cam.channel.compensation;
    cj["start_initialized"] = cam.channel.start_initialized;
    cj["exposure_seed_ms"] = double(cam.channel.exposure_seed.nanos) / 1e6;
    cj["trigger_line_delay_us"] = double(cam.trigger_line_delay.nanos) / 1e3;
    cj["strobe_line_delay_us"] = double(cam.strobe_line_delay.nanos) / 1e3;
    cj["readout_delay_ms"] = double(cam.device.readout_delay.nanos) / 1e6;
    cj["slow_period_s"] = cam.channel.slow_period.to_seconds();
    cj["spurious_startup_frames"] = cam.device.spurious_startup_frames;
    cj["drop_first_images"] = cam.device.drop_first_images;
    j["cameras"].push_back(cj);
  }
  j["imu"] = json{{"enabled", cfg.imu_enabled}, {"rate_hz", cfg.imu_rate_hz}};
  j["links"] = json{{"board_to_host", link_to_json(cfg.board_to_host)},
                    {"host_to_board", link_to_json(cfg.host_to_board)},
                    {"camera_to_host", link_to_json(cfg.camera_to_host)}};
  j["filter"] = json{
      {"enabled", cfg.filter.enabled},
      {"update_period_s", cfg.filter.update_period.to_seconds()},
      {"connect_at_slave_ms", double(cfg.filter.connect_at_slave.nanos) / 1e6},
      {"q_delta_stddev_us", std::sqrt(cfg.filter.noise.q_delta_ns2) / 1e3},
      {"q_eta_stddev", std::sqrt(cfg.filter.noise.q_eta2)},
      {"r_jitter_half_width_ms",
       std::sqrt(cfg.filter.noise.r_ns2 * 3.0) / 1e6},
      {"p0_delta_stddev_ms", std::sqrt(cfg.filter.init.p0_delta_ns2) / 1e6},
      {"p0_eta_stddev", std::sqrt(cfg.filter.init.p0_eta2)}};
  j["sync"] = json{
      {"match_threshold_ms", double(cfg.sync.match_threshold.nanos) / 1e6},
      {"init_window", cfg.sync.init_window},
      {"init_timeout_s", cfg.sync.init_timeout.to_seconds()},
      {"missing_stamp_timeout_frames", cfg.sync.missing_stamp_timeout_frames},
      {"stamp_buffer_horizon_s", cfg.sync.stamp_buffer_horizon.to_seconds()},
      {"translate_output", cfg.sync.translate_output}};
  json ex = json::object();
  if (cfg.led.enabled) {
    ex["led"] = json{{"pairs", cfg.led.pairs},
                     {"board_rate_hz", cfg.led.board_rate_hz},
                     {"dwell_threshold_frac", cfg.led.dwell_threshold_frac}};
  }
  if (cfg.ekf.enabled) {
    ex["ekf"] = json{
        {"duration_s", cfg.ekf.duration.to_seconds()},
        {"residual_gate_ms", double(cfg.ekf.residual_gate.nanos) / 1e6},
        {"convergence_window", cfg.ekf.convergence_window},
        {"innovation_gate_ms", double(cfg.ekf.innovation_gate.nanos) / 1e6},
        {"no_filter_horizon_s", cfg.ekf.no_filter_horizon.to_seconds()}};
  }
  if (cfg.study.enabled) {
    ex["sync_study"] =
        json{{"duration_s", cfg.study.duration.to_seconds()},
             {"settle_margin_s", cfg.study.settle_margin.to_seconds()}};
  }
  if (cfg.stress.enabled) {
    ex["assoc_stress"] = json{{"runs", cfg.stress.runs},
                              {"frames", cfg.stress.frames},
                              {"offset_range", cfg.stress.offset_range},
                              {"stamp_drop_prob", cfg.stress.stamp_drop_prob},
                              {"image_drop_prob", cfg.stress.image_drop_prob}};
  }
  j["experiments"] = ex;
  json checks = json::array();
  for (const auto& c : cfg.checks) {
    checks.push_back(
        json{{"metric", c.metric}, {"op", c.op}, {"value", c.value}});
  }
  j["checks"] = checks;
  j["output"] = json{{"message_trace", cfg.write_message_trace},
                     {"edge_trace", cfg.write_edge_trace}};
  return j;
}

std::string config_hash(const ScenarioConfig& cfg) {
  std::string dump = scenario_to_json(cfg).dump();
  uint64_t h = 1469598103934665603ull;
  for (char c : dump) {
    h ^= uint8_t(c);
    h *= 1099511628211ull;
  }
  char buf[20];
  snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

void apply_override(json& j, const std::string& assignment) {
  size_t eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override '" + assignment + "' is not key=value");
  }
  std::string path = assignment.substr(0, eq);
  std::string value = assignment.substr(eq + 1);
  json* node = &j;
  size_t pos = 0;
  while (pos < path.size()) {
    size_t dot = path.find('.', pos);
    std::string key =
        path.substr(pos, dot == std::string::npos ? dot : dot - pos);
    if (key.empty()) throw ConfigError("override path has an empty segment");
    bool is_index = !key.empty() &&
                    key.find_first_not_of("0123456789") == std::string::npos;
    if (is_index) {
      if (!node->is_array()) {
        throw ConfigError("override path '" + path +
                          "': '" + key + "' indexes a non-array");
      }
      size_t idx = size_t(std::stoul(key));
      if (idx >= node->size()) {
        throw ConfigError("override path '" + path + "': index " + key +
                          " out of range");
      }
      node = &(*node)[idx];
    } else {
      if (!node->is_object()) {
        throw ConfigError("override path '" + path + "': '" + key +
                          "' descends into a non-object");
      }
      if (dot == std::string::npos) {
        json parsed = json::parse(value, nullptr, false);
        (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
        return;
      }
      if (!node->contains(key)) (*node)[key] = json::object();
      node = &(*node)[key];
    }
    pos = dot == std::string::npos ? path.size() : dot + 1;
  }
  throw ConfigError("override path '" + path + "' ends on an array index");
}

ScenarioConfig load_scenario(const std::string& name_or_path,
                             const std::vector<std::string>& overrides) {
  std::string text;
  const auto& builtins = builtin_scenarios();
  auto it = builtins.find(name_or_path);
  if (it != builtins.end()) {
    text = it->second;
  } else {
    std::ifstream in(name_or_path);
    if (!in) {
      throw ConfigError("no builtin scenario or readable file named '" +
                        name_or_path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw ConfigError("scenario '" + name_or_path + "' is not valid JSON");
  }
  for (const auto& ov : overrides) apply_override(j, ov);
  std::vector<std::string> errors;
  auto cfg = scenario_from_json(j, &errors);
  if (!cfg) {
    std::string msg = "invalid scenario configuration:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return *cfg;
}

}  // namespace syncsim
