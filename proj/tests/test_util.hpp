// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <string>

namespace ionmoc_test {

// Per-process scratch directory for files written by tests.
inline std::filesystem::path tmp_dir() {
  static std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() /
             ("ionmoc_tests_" + std::to_string(static_cast<long>(::getpid())));
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

// Repository root, for the bundled data tables. Set by ctest; falls back to
// the working directory so tests also run from a repo-root shell.
inline std::filesystem::path src_dir() {
  if (const char* env = std::getenv("IONMOC_SRC")) return env;
  return std::filesystem::current_path();
}

inline std::string cli_path() {
  if (const char* env = std::getenv("IONMOC_CLI")) return env;
  return (std::filesystem::current_path() / "build" / "ionmoc-cli").string();
}

}  // namespace ionmoc_test
