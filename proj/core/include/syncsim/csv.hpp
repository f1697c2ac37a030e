// Copyright (c) 2026 The syncsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace syncsim {

// CSV cell with deterministic formatting: integers verbatim, doubles via
// shortest round-trip (to_chars), so identical values always produce
// identical bytes.
struct CsvCell {
  std::string text;
  CsvCell(int64_t v);
  CsvCell(uint64_t v);
  CsvCell(uint32_t v) : CsvCell(uint64_t(v)) {}
  CsvCell(int v) : CsvCell(int64_t(v)) {}
  CsvCell(double v);
  CsvCell(const char* s) : text(s) {}
  CsvCell(std::string s) : text(std::move(s)) {}
};

std::string format_double(double v);

// Writes one CSV file: an optional leading provenance comment, a header row,
// then data rows. Throws SimError on IO failure at close.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns,
            const std::string& provenance);
  ~CsvWriter();
  void row(const std::vector<CsvCell>& cells);
  void close();

 private:
  std::ofstream out_;
  std::string path_;
  size_t columns_;
  bool closed_{false};
};

}  // namespace syncsim
