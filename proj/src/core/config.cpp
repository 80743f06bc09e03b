// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#include "core/config.hpp"

#include <algorithm>
#include <cerrno>
#include <climits>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "core/csvio.hpp"
#include "core/error.hpp"

namespace ionmoc {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  for (char c : key) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '.';
    if (!ok) return false;
  }
  return true;
}

double to_double(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end != value.c_str() + value.size() || value.empty() || errno == ERANGE) {
    throw Error::config("key '" + key + "': expected a number, got '" + value + "'");
  }
  return v;
}

int to_int(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(value.c_str(), &end, 10);
  if (end != value.c_str() + value.size() || value.empty() || errno == ERANGE ||
      v < INT_MIN || v > INT_MAX) {
    throw Error::config("key '" + key + "': expected an integer, got '" + value + "'");
  }
  return static_cast<int>(v);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) items.push_back(trim(item));
  return items;
}

}  // namespace

ConfigMap ConfigMap::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error::io("config file not found: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str(), path.string());
}

ConfigMap ConfigMap::from_text(const std::string& text, const std::string& origin) {
  ConfigMap cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;

    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw Error::config(origin + " line " + std::to_string(line) +
                          ": expected 'key = value'");
    }
    Entry entry;
    entry.key = trim(stripped.substr(0, eq));
    entry.value = trim(stripped.substr(eq + 1));
    entry.line = line;
    if (!valid_key(entry.key)) {
      throw Error::config(origin + " line " + std::to_string(line) +
                          ": malformed key '" + entry.key + "'");
    }
    if (entry.value.empty()) {
      throw Error::config(origin + " line " + std::to_string(line) +
                          ": empty value for key '" + entry.key + "'");
    }
    if (const Entry* prior = cfg.find(entry.key)) {
      throw Error::config(origin + ": duplicate key '" + entry.key + "' (lines " +
                          std::to_string(prior->line) + " and " + std::to_string(line) +
                          ")");
    }
    cfg.entries_.push_back(std::move(entry));
  }
  return cfg;
}

ConfigMap::Entry* ConfigMap::find(const std::string& key) {
  for (Entry& e : entries_) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

const ConfigMap::Entry* ConfigMap::find(const std::string& key) const {
  for (const Entry& e : entries_) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

bool ConfigMap::has(const std::string& key) const { return find(key) != nullptr; }

std::string ConfigMap::take(const std::string& key) {
  Entry* e = find(key);
  if (!e) throw Error::config("missing required key '" + key + "'");
  e->consumed = true;
  return e->value;
}

std::string ConfigMap::require_string(const std::string& key) { return take(key); }

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) {
  if (has(key)) return take(key);
  defaults_.emplace_back(key, fallback);
  return fallback;
}

double ConfigMap::require_double(const std::string& key) {
  return to_double(key, take(key));
}

double ConfigMap::get_double(const std::string& key, double fallback) {
  if (has(key)) return to_double(key, take(key));
  defaults_.emplace_back(key, format_double(fallback));
  return fallback;
}

int ConfigMap::require_int(const std::string& key) { return to_int(key, take(key)); }

int ConfigMap::get_int(const std::string& key, int fallback) {
  if (has(key)) return to_int(key, take(key));
  defaults_.emplace_back(key, std::to_string(fallback));
  return fallback;
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) {
  if (!has(key)) {
    defaults_.emplace_back(key, fallback ? "true" : "false");
    return fallback;
  }
  const std::string value = take(key);
  if (value == "true") return true;
  if (value == "false") return false;
  throw Error::config("key '" + key + "': expected true or false, got '" + value + "'");
}

std::vector<int> ConfigMap::get_int_list(const std::string& key,
                                         const std::string& fallback) {
  const std::string value = get_string(key, fallback);
  std::vector<int> out;
  for (const std::string& item : split_list(value)) out.push_back(to_int(key, item));
  return out;
}

std::vector<double> ConfigMap::get_double_list(const std::string& key,
                                               const std::string& fallback) {
  const std::string value = get_string(key, fallback);
  std::vector<double> out;
  for (const std::string& item : split_list(value)) out.push_back(to_double(key, item));
  return out;
}

void ConfigMap::finish() const {
  for (const Entry& e : entries_) {
    if (!e.consumed) throw Error::config("unknown key '" + e.key + "'");
  }
}

std::vector<std::pair<std::string, std::string>> ConfigMap::entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(entries_.size());
  for (const Entry& e : entries_) out.emplace_back(e.key, e.value);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<std::string, std::string>> ConfigMap::materialized() const {
  auto out = defaults_;
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ionmoc
