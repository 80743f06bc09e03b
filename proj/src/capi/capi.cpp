// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#include "ionmoc/ionmoc.h"

#include <cmath>
#include <limits>
#include <string>

#include "core/angular.hpp"
#include "core/driver.hpp"
#include "core/error.hpp"
#include "core/stopping.hpp"

namespace {

thread_local std::string g_last_error;

int fail(int code, std::string msg) {
  g_last_error = std::move(msg);
  return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return 0;
  } catch (const ionmoc::Error& e) {
    return fail(ionmoc::exit_code(e.kind()), e.what());
  } catch (const std::exception& e) {
    return fail(2, e.what());
  }
}

}  // namespace

struct ionmoc_stopping {
  ionmoc::BraggKleeman model;
};

extern "C" {

const char* ionmoc_version(void) { return ionmoc::kVersion; }

const char* ionmoc_last_error(void) { return g_last_error.c_str(); }

int ionmoc_run(const char* subcommand, const char* config_path, const char* out_dir,
               int threads) {
  if (!subcommand || !config_path) {
    return fail(1, "ionmoc_run: subcommand and config_path must be non-NULL");
  }
  return guarded([&] {
    ionmoc::DriverOptions opt;
    opt.subcommand = subcommand;
    opt.config_path = config_path;
    if (out_dir) opt.out_dir = out_dir;
    opt.threads = threads > 0 ? threads : 0;
    ionmoc::run_driver(opt);
  });
}

int ionmoc_validate(const char* config_path) {
  if (!config_path) return fail(1, "ionmoc_validate: config_path must be non-NULL");
  return guarded([&] {
    ionmoc::DriverOptions opt;
    opt.subcommand = "validate";
    opt.config_path = config_path;
    ionmoc::run_driver(opt);
  });
}

ionmoc_stopping* ionmoc_stopping_power_law(double alpha, double p) {
  ionmoc_stopping* handle = nullptr;
  const int rc = guarded([&] { handle = new ionmoc_stopping{{alpha, p}}; });
  return rc == 0 ? handle : nullptr;
}

ionmoc_stopping* ionmoc_stopping_fit(const char* table_path, double e_lo, double e_hi) {
  if (!table_path) {
    fail(1, "ionmoc_stopping_fit: table_path must be non-NULL");
    return nullptr;
  }
  ionmoc_stopping* handle = nullptr;
  const int rc = guarded([&] {
    const ionmoc::RangeEnergyTable table = ionmoc::load_range_table(table_path);
    handle = new ionmoc_stopping{ionmoc::fit_bragg_kleeman(table, e_lo, e_hi)};
  });
  return rc == 0 ? handle : nullptr;
}

void ionmoc_stopping_free(ionmoc_stopping* model) { delete model; }

int ionmoc_stopping_eval(const ionmoc_stopping* model, double energy, double* out) {
  if (!model || !out) return fail(1, "ionmoc_stopping_eval: NULL argument");
  return guarded([&] {
    ionmoc::require(energy > 0.0, ionmoc::ErrorKind::Config,
                    "stopping power needs a positive energy");
    *out = model->model.stopping(energy);
  });
}

int ionmoc_stopping_range(const ionmoc_stopping* model, double energy, double* out) {
  if (!model || !out) return fail(1, "ionmoc_stopping_range: NULL argument");
  return guarded([&] {
    ionmoc::require(energy > 0.0, ionmoc::ErrorKind::Config,
                    "range needs a positive energy");
    *out = model->model.range(energy);
  });
}

int ionmoc_stopping_inverse_range(const ionmoc_stopping* model, double range,
                                  double* out) {
  if (!model || !out) return fail(1, "ionmoc_stopping_inverse_range: NULL argument");
  return guarded([&] {
    ionmoc::require(range > 0.0, ionmoc::ErrorKind::Config,
                    "inverse range needs a positive range");
    *out = model->model.inverse_range(range);
  });
}

int ionmoc_stopping_params(const ionmoc_stopping* model, double* alpha, double* p) {
  if (!model || !alpha || !p) return fail(1, "ionmoc_stopping_params: NULL argument");
  *alpha = model->model.alpha();
  *p = model->model.p();
  g_last_error.clear();
  return 0;
}

double ionmoc_hg_phase(double gamma, double theta) {
  double value = std::numeric_limits<double>::quiet_NaN();
  guarded([&] { value = ionmoc::hg_phase(gamma, theta); });
  return value;
}

}  // extern "C"
