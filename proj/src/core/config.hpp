// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace ionmoc {

// Flat dotted-key configuration: one `section.key = value` per line, '#'
// starts a comment. Every getter marks its key as consumed; finish() then
// rejects whatever is left over, so typos cannot silently fall back to
// defaults. Getters with a default record the materialized value for the
// run metadata echo.
class ConfigMap {
 public:
  ConfigMap() = default;

  static ConfigMap from_file(const std::filesystem::path& path);
  static ConfigMap from_text(const std::string& text, const std::string& origin);

  bool has(const std::string& key) const;

  std::string require_string(const std::string& key);
  std::string get_string(const std::string& key, const std::string& fallback);

  double require_double(const std::string& key);
  double get_double(const std::string& key, double fallback);

  int require_int(const std::string& key);
  int get_int(const std::string& key, int fallback);

  bool get_bool(const std::string& key, bool fallback);

  // Comma-separated lists. The fallback is given in the same textual form
  // so the echo shows exactly what a user would have written.
  std::vector<int> get_int_list(const std::string& key, const std::string& fallback);
  std::vector<double> get_double_list(const std::string& key, const std::string& fallback);

  // Throws on the first key, in file order, that no getter asked for.
  void finish() const;

  // Parsed entries and materialized defaults, both sorted by key.
  std::vector<std::pair<std::string, std::string>> entries() const;
  std::vector<std::pair<std::string, std::string>> materialized() const;

 private:
  struct Entry {
    std::string key;
    std::string value;
    int line = 0;
    bool consumed = false;
  };

  Entry* find(const std::string& key);
  const Entry* find(const std::string& key) const;
  std::string take(const std::string& key);

  std::vector<Entry> entries_;
  std::vector<std::pair<std::string, std::string>> defaults_;
  std::string origin_;
};

}  // namespace ionmoc
