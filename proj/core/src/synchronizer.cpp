// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#include "syncsim/synchronizer.hpp"

#include <algorithm>
#include <cstdlib>

namespace syncsim {

const char* to_string(DiagnosticKind k) {
  switch (k) {
    case DiagnosticKind::missing_stamp:
      return "missing_stamp";
    case DiagnosticKind::seq_gap:
      return "seq_gap";
    case DiagnosticKind::stamp_evicted:
      return "stamp_evicted";
    case DiagnosticKind::init_unstable:
      return "init_unstable";
    case DiagnosticKind::init_timeout:
      return "init_timeout";
    case DiagnosticKind::unmatched_init_image:
      return "unmatched_init_image";
    case DiagnosticKind::negative_board_seq:
      return "negative_board_seq";
  }
  return "?";
}

Synchronizer::Synchronizer(SyncConfig cfg) : cfg_(cfg) {}

Synchronizer::CameraAssoc& Synchronizer::cam(int id) { return cameras_[id]; }

SimTime Synchronizer::output_time(SimTime board_stamp) const {
  if (!cfg_.translate_output || !filter_provider) return board_stamp;
  const FilterState* st = filter_provider();
  if (!st) return board_stamp;
  return translate(*st, board_stamp);
}

void Synchronizer::on_image(const ImageMsg& msg, SimTime t_arrival) {
  latest_ = std::max(latest_, t_arrival);
  CameraAssoc& c = cam(msg.camera_id);
  if (!c.saw_activity) {
    c.saw_activity = true;
    c.first_activity = t_arrival;
  }
  switch (c.phase) {
    case Phase::initializing:
      c.init_images.push_back({msg.seq, msg.payload_id, t_arrival});
      break;
    case Phase::initialized:
      c.pending.push_back({msg.seq, msg.payload_id, t_arrival});
      break;
    case Phase::failed:
      return;
  }
  poll(t_arrival);
}

void Synchronizer::on_stamp(const TimestampMsg& msg, SimTime t_arrival) {
  latest_ = std::max(latest_, t_arrival);
  CameraAssoc& c = cam(msg.camera_id);
  if (!c.saw_activity) {
    c.saw_activity = true;
    c.first_activity = t_arrival;
  }
  switch (c.phase) {
    case Phase::initializing:
      c.init_stamps.push_back({msg.seq, msg.stamp, t_arrival});
      break;
    case Phase::initialized:
      c.stamps.emplace(int64_t(msg.seq),
                       BufferedStamp{msg.seq, msg.stamp, t_arrival});
      break;
    case Phase::failed:
      return;
  }
  poll(t_arrival);
}

void Synchronizer::on_imu(const ImuSampleMsg& msg, SimTime t_arrival) {
  latest_ = std::max(latest_, t_arrival);
  if (imu_saw_any_ && msg.seq != imu_next_seq_) {
    diagnostics.push_back(Diagnostic{DiagnosticKind::seq_gap, -1,
                                     int64_t(imu_next_seq_), int64_t(msg.seq),
                                     t_arrival});
  }
  imu_saw_any_ = true;
  imu_next_seq_ = msg.seq + 1;
  if (imu_out) {
    ImuRecord rec;
    rec.seq = msg.seq;
    rec.t = output_time(msg.stamp);
    rec.sample_id = msg.sample_id;
    imu_out(rec);
  }
  poll(t_arrival);
}

void Synchronizer::poll(SimTime now) {
  latest_ = std::max(latest_, now);
  for (auto& [id, c] : cameras_) {
    if (c.phase == Phase::initializing) resolve_init(id, c, now, false);
    if (c.phase == Phase::initialized) {
      drain(id, c, now, false);
      evict_stamps(id, c, now);
    }
  }
}

void Synchronizer::finalize(SimTime now) {
  latest_ = std::max(latest_, now);
  for (auto& [id, c] : cameras_) {
    if (c.phase == Phase::initializing) resolve_init(id, c, latest_, true);
    if (c.phase == Phase::initialized) drain(id, c, latest_, true);
  }
}

void Synchronizer::resolve_init(int camera_id, CameraAssoc& c, SimTime now,
                                bool flush) {
  // An image is decidable once no future stamp could still arrive closer
  // than the threshold, i.e. when `now` has moved a full threshold past it.
  while (!c.init_images.empty()) {
    const PendingImage img = c.init_images.front();
    if (!flush && now - img.arrival < cfg_.match_threshold) break;
    c.init_images.pop_front();

    auto best = c.init_stamps.end();
    int64_t best_diff = INT64_MAX;
    for (auto it = c.init_stamps.begin(); it != c.init_stamps.end(); ++it) {
      int64_t diff = std::llabs((it->arrival - img.arrival).nanos);
      if (diff < best_diff) {
        best_diff = diff;
        best = it;
      }
    }
    if (best == c.init_stamps.end() ||
        best_diff >= cfg_.match_threshold.nanos) {
      diagnostics.push_back(Diagnostic{DiagnosticKind::unmatched_init_image,
                                       camera_id, int64_t(img.seq), best_diff,
                                       now});
      continue;
    }
    int64_t offset = int64_t(img.seq) - int64_t(best->seq);
    c.init_stamps.erase(best);
    if (c.have_candidate && offset != c.candidate) {
      diagnostics.push_back(Diagnostic{DiagnosticKind::init_unstable,
                                       camera_id, c.candidate, offset, now});
      c.phase = Phase::failed;
      return;
    }
    c.candidate = offset;
    c.have_candidate = true;
    ++c.agree;
    if (c.agree >= cfg_.init_window) {
      promote(camera_id, c, now);
      return;
    }
  }
  if (c.phase == Phase::initializing && c.saw_activity && !flush &&
      now - c.first_activity > cfg_.init_timeout) {
    diagnostics.push_back(Diagnostic{DiagnosticKind::init_timeout, camera_id,
                                     c.agree, 0, now});
    c.phase = Phase::failed;
  }
}

void Synchronizer::promote(int camera_id, CameraAssoc& c, SimTime now) {
  c.phase = Phase::initialized;
  c.offset = c.candidate;
  // Everything still buffered flows through the steady-state path, which is
  // exact once the offset is known.
  for (const auto& s : c.init_stamps) {
    c.stamps.emplace(int64_t(s.seq), s);
  }
  c.init_stamps.clear();
  for (const auto& i : c.init_images) {
    c.pending.push_back(i);
  }
  c.init_images.clear();
  if (initialized_out) initialized_out(camera_id, c.offset);
  drain(camera_id, c, now, false);
}

void Synchronizer::drain(int camera_id, CameraAssoc& c, SimTime now,
                         bool flush) {
  const SimTime timeout =
      cfg_.frame_period * cfg_.missing_stamp_timeout_frames;
  while (!c.pending.empty()) {
    const PendingImage img = c.pending.front();
    int64_t board_seq = int64_t(img.seq) - c.offset;
    if (board_seq < 0) {
      // No board stamp can ever exist for this frame; it predates the
      // board's counting (a stale startup frame).
      c.pending.pop_front();
      diagnostics.push_back(Diagnostic{DiagnosticKind::negative_board_seq,
                                       camera_id, int64_t(img.seq), board_seq,
                                       now});
      continue;
    }
    auto it = c.stamps.find(board_seq);
    if (it != c.stamps.end()) {
      StampedImage out;
      out.camera_id = camera_id;
      out.image_seq = img.seq;
      out.board_seq = it->second.seq;
      out.payload_id = img.payload;
      out.t_image = output_time(it->second.stamp);
      c.stamps.erase(it);
      c.pending.pop_front();
      ++c.emitted;
      if (stamped_out) stamped_out(out);
      continue;
    }
    if (flush || now - img.arrival > timeout) {
      c.pending.pop_front();
      diagnostics.push_back(Diagnostic{DiagnosticKind::missing_stamp,
                                       camera_id, int64_t(img.seq), board_seq,
                                       flush ? latest_ : now});
      continue;
    }
    break;  // head still inside its grace window; later images wait in order
  }
}

void Synchronizer::evict_stamps(int camera_id, CameraAssoc& c, SimTime now) {
  for (auto it = c.stamps.begin(); it != c.stamps.end();) {
    if (now - it->second.arrival > cfg_.stamp_buffer_horizon) {
      diagnostics.push_back(Diagnostic{DiagnosticKind::stamp_evicted,
                                       camera_id, int64_t(it->second.seq), 0,
                                       now});
      it = c.stamps.erase(it);
    } else {
      ++it;
    }
  }
}

void Synchronizer::force_initialized(int camera_id, int64_t seq_offset) {
  CameraAssoc& c = cam(camera_id);
  c.phase = Phase::initialized;
  c.offset = seq_offset;
}

bool Synchronizer::camera_initialized(int camera_id) const {
  auto it = cameras_.find(camera_id);
  return it != cameras_.end() && it->second.phase == Phase::initialized;
}

bool Synchronizer::camera_failed(int camera_id) const {
  auto it = cameras_.find(camera_id);
  return it != cameras_.end() && it->second.phase == Phase::failed;
}

int64_t Synchronizer::seq_offset(int camera_id) const {
  auto it = cameras_.find(camera_id);
  return it == cameras_.end() ? 0 : it->second.offset;
}

uint64_t Synchronizer::emitted(int camera_id) const {
  auto it = cameras_.find(camera_id);
  return it == cameras_.end() ? 0 : it->second.emitted;
}

}  // namespace syncsim
