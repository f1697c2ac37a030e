// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#include "syncsim/csv.hpp"

#include <charconv>

#include "syncsim/errors.hpp"

namespace syncsim {

std::string format_double(double v) {
  char buf[48];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvCell::CsvCell(int64_t v) : text(std::to_string(v)) {}
CsvCell::CsvCell(uint64_t v) : text(std::to_string(v)) {}
CsvCell::CsvCell(double v) : text(format_double(v)) {}

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& columns,
                     const std::string& provenance)
    : out_(path, std::ios::binary), path_(path), columns_(columns.size()) {
  if (!out_) throw SimError("cannot open " + path + " for writing");
  if (!provenance.empty()) out_ << "# " << provenance << '\n';
  for (size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ << ',';
    out_ << columns[i];
  }
  out_ << '\n';
}

CsvWriter::~CsvWriter() {
  if (!closed_) {
    out_.flush();
  }
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i].text;
  }
  out_ << '\n';
}

void CsvWriter::close() {
  out_.flush();
  out_.close();
  closed_ = true;
  if (out_.fail()) throw SimError("write failed for " + path_);
}

}  // namespace syncsim
