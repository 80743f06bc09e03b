// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace ionmoc {

// Formats a double for CSV output. Values that are exactly integral print
// without a decimal point; everything else uses %.17g so that reading the
// text back reproduces the bit pattern.
std::string format_double(double v);

double parse_double(const std::string& s, const std::string& context);
long parse_long(const std::string& s, const std::string& context);

void ensure_parent_dir(const std::filesystem::path& path);

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);

  void raw_line(const std::string& line);
  void row(const std::vector<std::string>& cells);

  std::string cell(double v) const { return format_double(v); }
  std::string cell(int v) const { return std::to_string(v); }
  std::string cell(long v) const { return std::to_string(v); }
  std::string cell(std::size_t v) const { return std::to_string(v); }
  std::string cell(const std::string& v) const { return v; }
  std::string cell(const char* v) const { return v; }

  template <class... Ts>
  void cells(const Ts&... vs) {
    row({cell(vs)...});
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

struct CsvFile {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // 1-based data row numbers (header excluded, comments and blanks skipped).
  std::vector<int> row_numbers;
};

// Reads a comma-separated file. Lines starting with '#' and blank lines are
// skipped; the first remaining line is the header.
CsvFile read_csv(const std::filesystem::path& path);

}  // namespace ionmoc
