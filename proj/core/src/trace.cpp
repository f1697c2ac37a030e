// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#include "syncsim/trace.hpp"

#include <cinttypes>
#include <cstdio>
#include <istream>
#include <ostream>

#include "syncsim/errors.hpp"

namespace syncsim {

std::string format_trace_line(const TraceRecord& rec) {
  char buf[160];
  switch (rec.stream) {
    case TraceRecord::Stream::image:
      snprintf(buf, sizeof buf, "img:%d %" PRId64 " %u 0 %" PRIu64,
               rec.camera_id, rec.arrival.nanos, rec.seq, rec.payload);
      break;
    case TraceRecord::Stream::stamp:
      snprintf(buf, sizeof buf, "stamp:%d %" PRId64 " %u %" PRId64 " 0",
               rec.camera_id, rec.arrival.nanos, rec.seq, rec.stamp.nanos);
      break;
    case TraceRecord::Stream::imu:
      snprintf(buf, sizeof buf, "imu %" PRId64 " %u %" PRId64 " %" PRIu64,
               rec.arrival.nanos, rec.seq, rec.stamp.nanos, rec.payload);
      break;
  }
  return buf;
}

bool parse_trace_line(const std::string& line, size_t line_no,
                      TraceRecord* out) {
  size_t start = line.find_first_not_of(" \t\r");
  if (start == std::string::npos || line[start] == '#') return false;

  char tag[32];
  int64_t arrival = 0, stamp = 0;
  uint32_t seq = 0;
  uint64_t payload = 0;
  int n = sscanf(line.c_str(), "%31s %" SCNd64 " %u %" SCNd64 " %" SCNu64,
                 tag, &arrival, &seq, &stamp, &payload);
  if (n != 5) {
    throw TraceFormatError(line_no, "expected 5 fields, got " +
                                        std::to_string(n < 0 ? 0 : n));
  }
  std::string t(tag);
  TraceRecord rec;
  if (t.rfind("img:", 0) == 0) {
    rec.stream = TraceRecord::Stream::image;
    rec.camera_id = atoi(t.c_str() + 4);
  } else if (t.rfind("stamp:", 0) == 0) {
    rec.stream = TraceRecord::Stream::stamp;
    rec.camera_id = atoi(t.c_str() + 6);
  } else if (t == "imu") {
    rec.stream = TraceRecord::Stream::imu;
  } else {
    throw TraceFormatError(line_no, "unknown stream tag '" + t + "'");
  }
  rec.arrival = SimTime{arrival};
  rec.seq = seq;
  rec.stamp = SimTime{stamp};
  rec.payload = payload;
  *out = rec;
  return true;
}

std::vector<TraceRecord> read_trace(std::istream& in) {
  std::vector<TraceRecord> records;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    TraceRecord rec;
    if (parse_trace_line(line, line_no, &rec)) records.push_back(rec);
  }
  return records;
}

void write_trace(std::ostream& out, const std::vector<TraceRecord>& records) {
  for (const auto& rec : records) {
    out << format_trace_line(rec) << '\n';
  }
}

}  // namespace syncsim
