// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "ionmoc/ionmoc.h"

int main(int argc, char** argv) {
  CLI::App app{"ionmoc: deterministic charged-particle transport experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ionmoc_version());

  struct Entry {
    const char* name;
    const char* blurb;
  };
  const Entry entries[] = {
      {"bench", "Grid refinement study against the closed-form ballistic solution"},
      {"iterate", "Source-iteration convergence history on the study grid"},
      {"hg", "Dose fields and beam widths across scattering anisotropy values"},
      {"angular", "Ordinate-count and cone-angle resolution studies"},
      {"coupling", "Iteration counts as scattering becomes forward-peaked"},
      {"carbon", "Carbon beam with secondary proton and neutron dose"},
      {"validate", "Check a config file without running anything"},
  };

  std::string config;
  std::string out;
  int threads = 0;
  for (const Entry& entry : entries) {
    CLI::App* sub = app.add_subcommand(entry.name, entry.blurb);
    sub->add_option("--config", config, "Experiment config file")->required();
    if (std::string(entry.name) != "validate") {
      sub->add_option("--out", out, "Output directory (default: per-experiment)");
      sub->add_option("--threads", threads, "Worker threads (default: config value)");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  const int rc = cmd == "validate"
                     ? ionmoc_validate(config.c_str())
                     : ionmoc_run(cmd.c_str(), config.c_str(),
                                  out.empty() ? nullptr : out.c_str(), threads);
  if (rc != 0) std::fprintf(stderr, "ionmoc: %s\n", ionmoc_last_error());
  return rc;
}
