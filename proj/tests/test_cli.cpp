// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "test_util.hpp"

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const auto base = ionmoc_test::tmp_dir() / ("cli_" + std::to_string(counter++));
  const auto out_file = base.string() + ".out";
  const auto err_file = base.string() + ".err";
  const std::string cmd =
      ionmoc_test::cli_path() + " " + args + " >" + out_file + " 2>" + err_file;

  RunResult result;
  const int status = std::system(cmd.c_str());
  if (WIFEXITED(status)) result.code = WEXITSTATUS(status);
  result.out = slurp(out_file);
  result.err = slurp(err_file);
  return result;
}

std::filesystem::path write_config(const std::string& name, const std::string& text) {
  const auto path = ionmoc_test::tmp_dir() / name;
  std::ofstream out(path);
  out << text;
  return path;
}

const std::string kTinyIterate =
    "run.experiment = iterate\n"
    "grid.nx = 9\ngrid.ny = 9\ngrid.ne = 5\n"
    "angular.Q = 5\n"
    "iteration.tol = 1e-6\n";

}  // namespace

TEST_CASE("validate exits 0 and writes nothing") {
  const auto cfg = write_config("cli_good.cfg", kTinyIterate);
  const RunResult r = run_cli("validate --config " + cfg.string());
  CHECK(r.code == 0);
  CHECK(r.err.empty());
}

TEST_CASE("config mistakes exit 1 with the offending key on stderr") {
  const auto cfg = write_config("cli_typo.cfg",
                                "run.experiment = iterate\nangular.Qs = 5\n");
  const RunResult r = run_cli("iterate --config " + cfg.string());
  CHECK(r.code == 1);
  CHECK(r.err.find("unknown key 'angular.Qs'") != std::string::npos);
}

TEST_CASE("a missing config file exits 3 naming the path") {
  const auto missing = ionmoc_test::tmp_dir() / "cli_missing.cfg";
  const RunResult r = run_cli("iterate --config " + missing.string());
  CHECK(r.code == 3);
  CHECK(r.err.find(missing.string()) != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
  CHECK(run_cli("").code == 1);
  CHECK(run_cli("iterate").code == 1);
  CHECK(run_cli("frobnicate --config x.cfg").code == 1);
}

TEST_CASE("--version prints the library version") {
  const RunResult r = run_cli("--version");
  CHECK(r.code == 0);
  CHECK(r.out.find("1.0.0") != std::string::npos);
}

TEST_CASE("bench emits the grid study artifact") {
  const auto out = ionmoc_test::tmp_dir() / "cli_bench";
  std::filesystem::remove_all(out);
  const auto cfg = write_config("cli_bench.cfg",
                                "run.experiment = bench\n"
                                "grid.levels = 9x9x5, 13x13x7\n"
                                "angular.Q = 1\n");
  const RunResult r = run_cli("bench --config " + cfg.string() + " --out " + out.string());
  CHECK(r.code == 0);
  CHECK(std::filesystem::exists(out / "benchmark_grid_study.csv"));
  CHECK(std::filesystem::exists(out / "run_metadata"));
}

TEST_CASE("thread count does not change the CSV payload") {
  const auto cfg = write_config("cli_threads.cfg", kTinyIterate);
  const auto out1 = ionmoc_test::tmp_dir() / "cli_serial";
  const auto out3 = ionmoc_test::tmp_dir() / "cli_parallel";
  std::filesystem::remove_all(out1);
  std::filesystem::remove_all(out3);

  CHECK(run_cli("iterate --config " + cfg.string() + " --out " + out1.string() +
                " --threads 1")
            .code == 0);
  CHECK(run_cli("iterate --config " + cfg.string() + " --out " + out3.string() +
                " --threads 3")
            .code == 0);

  const std::string serial = slurp(out1 / "benchmark_finest_iter_history.csv");
  const std::string parallel = slurp(out3 / "benchmark_finest_iter_history.csv");
  CHECK(serial.size() > 0);
  CHECK(serial == parallel);
}
