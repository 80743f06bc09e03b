// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#include "core/csvio.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "core/error.hpp"

namespace ionmoc {

std::string format_double(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 9.007199254740992e15) {
    return std::to_string(static_cast<long long>(v));
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, const std::string& context) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end != begin && (end[-1] == ' ' || end[-1] == '\t')) --end;
  double v = 0.0;
  auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end || begin == end) {
    throw Error::io(context + ": cannot parse '" + s + "' as a number");
  }
  return v;
}

long parse_long(const std::string& s, const std::string& context) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end != begin && (end[-1] == ' ' || end[-1] == '\t')) --end;
  long v = 0;
  auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end || begin == end) {
    throw Error::io(context + ": cannot parse '" + s + "' as an integer");
  }
  return v;
}

void ensure_parent_dir(const std::filesystem::path& path) {
  auto parent = path.parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(parent, ec);
  if (ec) {
    throw Error::io("cannot create directory '" + parent.string() + "': " + ec.message());
  }
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : path_(path) {
  ensure_parent_dir(path);
  out_.open(path);
  if (!out_) throw Error::io("cannot open '" + path.string() + "' for writing");
}

void CsvWriter::raw_line(const std::string& line) {
  out_ << line << '\n';
  if (!out_) throw Error::io("write failed on '" + path_.string() + "'");
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
  if (!out_) throw Error::io("write failed on '" + path_.string() + "'");
}

static std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

CsvFile read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error::io("cannot open '" + path.string() + "' for reading");
  CsvFile file;
  std::string line;
  bool have_header = false;
  int data_row = 0;
  while (std::getline(in, line)) {
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (!have_header) {
      file.header = split_commas(line);
      have_header = true;
      continue;
    }
    ++data_row;
    file.rows.push_back(split_commas(line));
    file.row_numbers.push_back(data_row);
  }
  return file;
}

}  // namespace ionmoc
