// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <utility>
#include <vector>

#include "core/angular.hpp"
#include "core/grid.hpp"
#include "core/stopping.hpp"
#include "core/sweep.hpp"

namespace ionmoc {

enum class DiagnosticKind { DeltaInf, WeightedL2 };

struct IterationConfig {
  double tol = 1e-8;
  // Relative mode compares against the first iteration's diagnostic.
  bool tol_relative = true;
  int n_max = 200;
  DiagnosticKind diagnostic = DiagnosticKind::DeltaInf;
  // Known contraction factor; 0 means estimate from the history.
  double rho_override = 0.0;
  // When positive, also stop once the a posteriori error bound
  // rho/(1-rho) * diff drops below this target.
  double target_error = 0.0;
};

struct IterationRecord {
  int iter = 0;
  double diff_inf = 0.0;
  double diff_wl2 = 0.0;
  double seconds = 0.0;
};

struct IterationReport {
  std::vector<IterationRecord> history;
  bool converged = false;
  double rho_hat = 0.0;
};

using IterationObserver = std::function<void(int, const AngularField&)>;

// Max-norm distance between iterates over all nodes and directions.
double delta_inf(const AngularField& u, const AngularField& v);

// Weighted L2 distance with node weight [sigma_t(E) - S'(E)] and trapezoid
// quadrature over (x, y, E), summed over directions with the angular
// weights.
double weighted_l2_diff(const PhaseGrid& grid, const DirectionSet& dirs,
                        const StoppingModel& stopping, const EnergyFunction& sigma_t,
                        const AngularField& u, const AngularField& v);

// Geometric mean of successive diagnostic ratios over the last half of the
// usable history. Entries that sit on the floating-point plateau (below
// 100 eps times the largest entry) are ignored. Needs at least four usable
// entries, otherwise returns NaN.
double estimate_contraction(const std::vector<double>& diffs);

// Fixed-point error bound rho/(1-rho) * diff; +inf unless 0 < rho < 1.
double aposteriori_bound(double rho, double diff);

// Source iteration: the lagged scattering gain is re-swept until the
// diagnostic drops below tolerance. The initial iterate is the ballistic
// solve (zero gain). Growth of the diagnostic by 10x over five iterations
// aborts with a divergence error; hitting n_max just reports
// converged = false.
std::pair<AngularField, IterationReport> source_iterate(
    const PhaseGrid& grid, const StoppingModel& stopping, const DirectionSet& dirs,
    const TransferMatrix& transfer, const InflowData& inflow,
    const VolumetricSource* extra_source, const IterationConfig& cfg,
    const SweepParams& sweep_params = {}, int threads = 1,
    const IterationObserver& observer = {});

// Writes "iter,diff_inf,diff_wl2,seconds" rows.
void write_iteration_history_csv(const std::filesystem::path& path,
                                 const IterationReport& report);

}  // namespace ionmoc
