// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include "core/error.hpp"

namespace ionmoc {

inline constexpr const char* kVersion = "1.0.0";

struct DriverOptions {
  std::string subcommand;
  std::filesystem::path config_path;
  std::filesystem::path out_dir;  // empty keeps the config value or the built-in default
  int threads = 0;                // 0 keeps the config value or the built-in default
};

// Parses and validates the config, runs the selected experiment, and writes
// its CSV artifacts plus a run_metadata key-value file into the output
// directory. The validate subcommand builds the grid, quadrature, and
// physics models to exercise every invariant, then returns without writing
// anything.
void run_driver(const DriverOptions& options);

// Process exit code for an error category: config 1, divergence and other
// numeric failures 2, I/O 3.
int exit_code(ErrorKind kind);

}  // namespace ionmoc
