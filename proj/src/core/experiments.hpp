// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <vector>

#include "core/angular.hpp"
#include "core/exact.hpp"
#include "core/grid.hpp"
#include "core/iteration.hpp"
#include "core/observables.hpp"
#include "core/stopping.hpp"
#include "core/sweep.hpp"

namespace ionmoc {

// Pencil beam entering through the left face: Gaussian in y times a Gaussian
// energy spectrum, carried by the central angular node. The nodal inflow
// density divides the profile by the central bin weight, so the beam stays
// the same physical object when Q or the cone angle change.
struct BeamModel {
  double e_beam = 55.0;
  double sigma_e = 10.0;
  double y_center = 2.0;
  double sigma_y = 0.6;
  double amplitude = 1.0;

  double profile(double y, double e) const;
};

struct GridLevel {
  int nx = 0, ny = 0, ne = 0;
};

// One bag of knobs for the five study harnesses. Each harness reads the
// subset it needs; unused fields are ignored.
struct StudySpec {
  double x_min = 0.0, x_max = 4.0;
  double y_min = 0.0, y_max = 4.0;
  double e_min = 2.0, e_max = 86.0;
  GridLevel grid{33, 33, 17};
  std::vector<GridLevel> grid_levels;  // refinement ladder; empty means 4 doubling levels

  double alpha = 2.147e-3;
  double p = 1.777;
  double sigma_el = 0.7;
  double gamma = 0.9;

  int q = 17;
  double theta_c = 1.5707963267948966;

  std::vector<int> q_list;          // ordinates sweep; empty means {3,5,9,17,33,65}
  int q_ref = 257;
  int q_star = 33;
  int q_cone_ref = 129;
  std::vector<double> theta_c_list;  // cone sweep; empty means {pi/8, pi/4, 3pi/8, pi/2}
  double theta_max = 1.5707963267948966;

  std::vector<double> gamma_list;  // empty means the per-experiment default list

  // Shared absolute stop threshold for the coupling sweep, so iteration
  // counts across the gamma list are comparable.
  double coupling_tol_abs = 3e-9;

  double x_dagger = 0.0;  // <= 0 means half the beam range
  BeamModel beam;

  IterationConfig iteration;
  SweepParams sweep;
  int threads = 1;
  std::filesystem::path out_dir;
};

double resolve_x_dagger(const StudySpec& spec);

// Inflow carried by the central node of dirs, zero on the top energy face.
InflowData beam_inflow(const BeamModel& beam, const DirectionSet& dirs);

struct Exp1Level {
  int nx = 0, ny = 0, ne = 0;
  double error = 0.0;
};
struct Exp1Result {
  std::vector<Exp1Level> levels;
  double slope = 0.0;  // log-log fit of error vs N = Nx Ny Ne
};

// Refinement study against the closed-form ballistic solution with the
// Dirac kernel cancellation; emits benchmark_grid_study.csv.
Exp1Result run_experiment_1(const StudySpec& spec);

struct Exp2Result {
  IterationReport report;
};

// Iteration history on the study grid with the HG kernel; emits
// benchmark_finest_iter_history.csv.
Exp2Result run_experiment_2(const StudySpec& spec);

struct Exp3Row {
  double gamma = 0.0;
  double width = 0.0;
};
struct Exp3Result {
  std::vector<Exp3Row> rows;
};

// Dose fields per anisotropy value plus beam widths at the probe depth;
// emits hg_dose_<tag>.csv per gamma and hg_beam_widths.csv.
Exp3Result run_experiment_3(const StudySpec& spec);

struct Exp4QRow {
  int q = 0;
  double e_inf = 0.0;
  double width = 0.0;
};
struct Exp4ConeRow {
  double theta_c = 0.0;
  double e_inf_fullref = 0.0;
  double e_inf_coneref = 0.0;
};
struct Exp4Result {
  std::vector<Exp4QRow> q_rows;
  std::vector<Exp4ConeRow> cone_rows;
};

// Ordinates sweep against the Q_ref reference and cone sweep against the
// maximal-cone and per-cone references; emits angular_Q_study.csv and
// angular_cone_study.csv. Reference doses are cached on disk keyed by a
// hash of everything that feeds them.
Exp4Result run_experiment_4(const StudySpec& spec);

struct Exp5Row {
  double gamma = 0.0;
  int n_iter = 0;
  double last_delta_inf = 0.0;
};
struct Exp5Result {
  std::vector<Exp5Row> rows;
};

// Iteration counts across the anisotropy list; emits SI_gamma_counts.csv
// and SI_gamma_history_<tag>.csv per gamma.
Exp5Result run_experiment_5(const StudySpec& spec);

// File tag for an anisotropy value: 0.95 becomes "g0p9500".
std::string gamma_tag(double gamma);

}  // namespace ionmoc
