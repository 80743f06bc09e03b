// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#include "core/iteration.hpp"

#include <cfloat>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "core/csvio.hpp"
#include "core/error.hpp"
#include "core/parallel.hpp"

namespace ionmoc {

double delta_inf(const AngularField& u, const AngularField& v) {
  return max_abs_diff(u, v);
}

double weighted_l2_diff(const PhaseGrid& grid, const DirectionSet& dirs,
                        const StoppingModel& stopping, const EnergyFunction& sigma_t,
                        const AngularField& u, const AngularField& v) {
  std::vector<double> we(grid.ne());
  for (int m = 0; m < grid.ne(); ++m) {
    double e = grid.e(m);
    we[m] = grid.we(m) * (sigma_t(e) - stopping.stopping_deriv(e));
  }
  double total = 0.0;
  for (int i = 0; i < dirs.q; ++i) {
    const auto& a = u.dir(i);
    const auto& b = v.dir(i);
    double dir_sum = 0.0;
    for (int k = 0; k < grid.nx(); ++k) {
      for (int l = 0; l < grid.ny(); ++l) {
        double wxy = grid.wx(k) * grid.wy(l);
        for (int m = 0; m < grid.ne(); ++m) {
          double d = a.at(k, l, m) - b.at(k, l, m);
          dir_sum += wxy * we[m] * d * d;
        }
      }
    }
    total += dirs.weight[i] * dir_sum;
  }
  return std::sqrt(total);
}

double estimate_contraction(const std::vector<double>& diffs) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  double peak = 0.0;
  for (double d : diffs) peak = std::max(peak, d);
  if (peak <= 0.0) return nan;
  const double floor = 100.0 * DBL_EPSILON * peak;

  std::vector<double> ratios;
  for (std::size_t i = 1; i < diffs.size(); ++i) {
    if (diffs[i] > floor && diffs[i - 1] > floor) {
      ratios.push_back(diffs[i] / diffs[i - 1]);
    }
  }
  std::size_t usable = 0;
  for (double d : diffs) {
    if (d > floor) ++usable;
  }
  if (usable < 4 || ratios.empty()) return nan;

  std::size_t start = ratios.size() / 2;
  double log_sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = start; i < ratios.size(); ++i) {
    log_sum += std::log(ratios[i]);
    ++count;
  }
  return std::exp(log_sum / count);
}

double aposteriori_bound(double rho, double diff) {
  if (!(rho > 0.0 && rho < 1.0)) return std::numeric_limits<double>::infinity();
  return rho / (1.0 - rho) * diff;
}

namespace {

// Gridded parts of the extra source live on the same grid as the gain, so
// they fold into it by node-wise addition; only the analytic part rides
// along separately.
VolumetricSource merge_gain(AngularField& gain, const VolumetricSource* extra) {
  VolumetricSource merged;
  merged.per_dir = &gain;
  if (!extra) return merged;
  if (extra->per_dir) {
    for (int i = 0; i < gain.q(); ++i) {
      auto& dst = gain.dir(i).data();
      const auto& src = extra->per_dir->dir(i).data();
      for (std::size_t n = 0; n < dst.size(); ++n) dst[n] += src[n];
    }
  }
  if (extra->shared) {
    for (int i = 0; i < gain.q(); ++i) {
      auto& dst = gain.dir(i).data();
      const auto& src = extra->shared->data();
      for (std::size_t n = 0; n < dst.size(); ++n) {
        dst[n] += extra->shared_scale * src[n];
      }
    }
  }
  merged.analytic = extra->analytic;
  return merged;
}

}  // namespace

std::pair<AngularField, IterationReport> source_iterate(
    const PhaseGrid& grid, const StoppingModel& stopping, const DirectionSet& dirs,
    const TransferMatrix& transfer, const InflowData& inflow,
    const VolumetricSource* extra_source, const IterationConfig& cfg,
    const SweepParams& sweep_params, int threads, const IterationObserver& observer) {
  require(cfg.tol > 0.0, ErrorKind::Config,
          "iteration.tol must be positive, got " + format_double(cfg.tol));
  require(cfg.n_max >= 1, ErrorKind::Config,
          "iteration.n_max must be at least 1, got " + std::to_string(cfg.n_max));
  require(transfer.q == dirs.q, ErrorKind::Config,
          "transfer matrix size does not match the direction set");
  if (threads < 1) threads = 1;

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&t0] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  const int q = dirs.q;
  AngularField u(grid, q);
  VolumetricSource ballistic_source = extra_source ? *extra_source : VolumetricSource{};
  parallel_for(q, threads, [&](int i) {
    u.dir(i) = sweep_direction(grid, stopping, transfer.sigma_t, dirs.omega[i], i, inflow,
                               ballistic_source, sweep_params);
  });

  IterationReport report;
  std::vector<double> diag_history;
  AngularField gain(grid, q);
  AngularField u_next(grid, q);
  double first_diag = 0.0;

  for (int n = 1; n <= cfg.n_max; ++n) {
    apply_gain(transfer, dirs, u, gain);
    VolumetricSource merged = merge_gain(gain, extra_source);
    parallel_for(q, threads, [&](int i) {
      u_next.dir(i) = sweep_direction(grid, stopping, transfer.sigma_t, dirs.omega[i], i,
                                      inflow, merged, sweep_params);
    });

    double d_inf = delta_inf(u_next, u);
    double d_wl2 = weighted_l2_diff(grid, dirs, stopping, transfer.sigma_t, u_next, u);
    report.history.push_back({n, d_inf, d_wl2, elapsed()});
    double diag = cfg.diagnostic == DiagnosticKind::DeltaInf ? d_inf : d_wl2;
    diag_history.push_back(diag);
    if (n == 1) first_diag = diag;

    if (!std::isfinite(diag)) {
      throw Error::divergence("divergent iteration: non-finite diagnostic at iteration " +
                              std::to_string(n));
    }
    if (n >= 6 && diag > 10.0 * diag_history[static_cast<std::size_t>(n) - 6]) {
      throw Error::divergence(
          "divergent iteration: diagnostic grew more than 10x over five iterations (" +
          format_double(diag_history[static_cast<std::size_t>(n) - 6]) + " -> " +
          format_double(diag) + ")");
    }

    std::swap(u, u_next);
    if (observer) observer(n, u);

    double threshold = cfg.tol_relative ? cfg.tol * first_diag : cfg.tol;
    if (diag <= threshold) {
      report.converged = true;
      break;
    }
    if (cfg.target_error > 0.0) {
      double rho =
          cfg.rho_override > 0.0 ? cfg.rho_override : estimate_contraction(diag_history);
      if (std::isfinite(rho) && rho > 0.0 && rho < 1.0 &&
          aposteriori_bound(rho, diag) <= cfg.target_error) {
        report.converged = true;
        break;
      }
    }
  }

  report.rho_hat = estimate_contraction(diag_history);
  return {std::move(u), std::move(report)};
}

void write_iteration_history_csv(const std::filesystem::path& path,
                                 const IterationReport& report) {
  CsvWriter w(path);
  w.raw_line("iter,diff_inf,diff_wl2,seconds");
  for (const auto& rec : report.history) {
    w.cells(rec.iter, rec.diff_inf, rec.diff_wl2, rec.seconds);
  }
}

}  // namespace ionmoc
