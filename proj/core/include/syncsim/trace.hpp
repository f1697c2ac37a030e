// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "syncsim/time.hpp"

namespace syncsim {

// One recorded host-side message arrival. The on-disk form is line-delimited
// text, one record per line, in arrival order:
//
//   img:<camera>   <arrival_ns> <seq> 0          <payload_id>
//   stamp:<camera> <arrival_ns> <seq> <stamp_ns> 0
//   imu            <arrival_ns> <seq> <stamp_ns> <sample_id>
//
// Lines starting with '#' are comments.
struct TraceRecord {
  enum class Stream { image, stamp, imu };
  Stream stream{Stream::image};
  int camera_id{-1};
  SimTime arrival{};
  uint32_t seq{0};
  SimTime stamp{};
  uint64_t payload{0};
};

std::string format_trace_line(const TraceRecord& rec);

// Parses one line; returns false for blank/comment lines. Throws
// TraceFormatError with the given line number on malformed input.
bool parse_trace_line(const std::string& line, size_t line_no,
                      TraceRecord* out);

std::vector<TraceRecord> read_trace(std::istream& in);
void write_trace(std::ostream& out, const std::vector<TraceRecord>& records);

}  // namespace syncsim
