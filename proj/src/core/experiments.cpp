// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#include "core/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

#include "core/csvio.hpp"
#include "core/error.hpp"

namespace ionmoc {

double BeamModel::profile(double y, double e) const {
  const double ty = (y - y_center) / sigma_y;
  const double te = (e - e_beam) / sigma_e;
  return amplitude * std::exp(-0.5 * ty * ty) * std::exp(-0.5 * te * te);
}

double resolve_x_dagger(const StudySpec& spec) {
  if (spec.x_dagger > 0.0) return spec.x_dagger;
  return 0.5 * BraggKleeman(spec.alpha, spec.p).range(spec.beam.e_beam);
}

InflowData beam_inflow(const BeamModel& beam, const DirectionSet& dirs) {
  const int central = dirs.central();
  const double scale = 1.0 / dirs.weight[static_cast<std::size_t>(central)];
  InflowData inflow;
  inflow.spatial = [beam, central, scale](EntryFace face, Vec2 pos, double e0, int dir) {
    if (face != EntryFace::Left || dir != central) return 0.0;
    return scale * beam.profile(pos.y, e0);
  };
  inflow.top = [](Vec2, int) { return 0.0; };
  return inflow;
}

std::string gamma_tag(double gamma) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", gamma);
  std::string tag(buf);
  std::replace(tag.begin(), tag.end(), '.', 'p');
  return "g" + tag;
}

namespace {

PhaseGrid make_grid(const StudySpec& spec, const GridLevel& level) {
  GridSpec gs;
  gs.x_min = spec.x_min;
  gs.x_max = spec.x_max;
  gs.y_min = spec.y_min;
  gs.y_max = spec.y_max;
  gs.e_min = spec.e_min;
  gs.e_max = spec.e_max;
  gs.nx = level.nx;
  gs.ny = level.ny;
  gs.ne = level.ne;
  return PhaseGrid(gs);
}

struct StudySolve {
  AngularField psi;
  IterationReport report;
};

StudySolve solve_study(const StudySpec& spec, const PhaseGrid& grid, const DirectionSet& dirs,
                       const ScatterKernel& kernel, const InflowData& inflow) {
  const BraggKleeman bk(spec.alpha, spec.p);
  const TransferMatrix transfer = build_transfer_matrix(kernel, dirs);
  auto [psi, report] = source_iterate(grid, bk, dirs, transfer, inflow, nullptr, spec.iteration,
                                      spec.sweep, spec.threads);
  return {std::move(psi), std::move(report)};
}

DoseField hg_dose(const StudySpec& spec, const PhaseGrid& grid, int q, double theta_c,
                  double gamma) {
  const DirectionSet dirs = build_direction_set(q, theta_c, {1.0, 0.0});
  const ScatterKernel kernel{KernelKind::HenyeyGreenstein, spec.sigma_el, gamma};
  const StudySolve sol = solve_study(spec, grid, dirs, kernel, beam_inflow(spec.beam, dirs));
  return compute_dose(grid, dirs, sol.psi, BraggKleeman(spec.alpha, spec.p));
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string reference_fingerprint(const StudySpec& spec, const GridLevel& level, int q,
                                  double theta_c) {
  std::string s = "angular-reference";
  const auto add = [&s](const std::string& key, double v) {
    s += "|" + key + "=" + format_double(v);
  };
  s += "|nx=" + std::to_string(level.nx) + "|ny=" + std::to_string(level.ny) +
       "|ne=" + std::to_string(level.ne) + "|q=" + std::to_string(q);
  add("theta_c", theta_c);
  add("x_min", spec.x_min);
  add("x_max", spec.x_max);
  add("y_min", spec.y_min);
  add("y_max", spec.y_max);
  add("e_min", spec.e_min);
  add("e_max", spec.e_max);
  add("alpha", spec.alpha);
  add("p", spec.p);
  add("sigma_el", spec.sigma_el);
  add("gamma", spec.gamma);
  add("e_beam", spec.beam.e_beam);
  add("sigma_e", spec.beam.sigma_e);
  add("y_center", spec.beam.y_center);
  add("sigma_y", spec.beam.sigma_y);
  add("amplitude", spec.beam.amplitude);
  add("tol", spec.iteration.tol);
  add("tol_relative", spec.iteration.tol_relative ? 1.0 : 0.0);
  add("n_max", spec.iteration.n_max);
  add("step_factor", spec.sweep.source_step_factor);
  return s;
}

DoseField cached_reference_dose(const StudySpec& spec, const PhaseGrid& grid,
                                const GridLevel& level, int q, double theta_c) {
  char hex[24];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(
                    fnv1a(reference_fingerprint(spec, level, q, theta_c))));
  const std::filesystem::path path =
      spec.out_dir / "reference_cache" / ("ref_dose_" + std::string(hex) + ".csv");
  if (std::filesystem::exists(path)) return read_dose_csv(path, grid);

  const DoseField dose = hg_dose(spec, grid, q, theta_c, spec.gamma);
  write_dose_csv(path, grid, dose);
  return dose;
}

double fit_loglog_slope(const std::vector<double>& n, const std::vector<double>& err) {
  double mx = 0.0, my = 0.0;
  const double count = static_cast<double>(n.size());
  std::vector<double> lx(n.size()), ly(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    lx[i] = std::log(n[i]);
    ly[i] = std::log(std::max(err[i], 1e-300));
    mx += lx[i];
    my += ly[i];
  }
  mx /= count;
  my /= count;
  double cov = 0.0, var = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    cov += (lx[i] - mx) * (ly[i] - my);
    var += (lx[i] - mx) * (lx[i] - mx);
  }
  return cov / var;
}

}  // namespace

Exp1Result run_experiment_1(const StudySpec& spec) {
  std::vector<GridLevel> levels = spec.grid_levels;
  if (levels.empty()) levels = {{9, 9, 5}, {17, 17, 9}, {33, 33, 17}, {65, 65, 33}};
  require(levels.size() >= 2, ErrorKind::Config, "refinement study needs at least 2 grid levels");

  const BraggKleeman bk(spec.alpha, spec.p);
  const DirectionSet dirs = build_direction_set(1, spec.theta_c, {1.0, 0.0});
  const InflowData beam = beam_inflow(spec.beam, dirs);

  const ExactBallisticSolution exact(bk, spec.x_min, spec.x_max, spec.y_min, spec.y_max,
                                     beam.spatial);
  const ScatterKernel kernel{KernelKind::Dirac, spec.sigma_el, 0.0};
  const TransferMatrix transfer = build_transfer_matrix(kernel, dirs);

  Exp1Result result;
  std::vector<double> sizes, errors;
  for (const GridLevel& level : levels) {
    const PhaseGrid grid = make_grid(spec, level);
    const InflowData inflow = exact.inflow(grid, dirs);
    auto [psi, report] = source_iterate(grid, bk, dirs, transfer, inflow, nullptr,
                                        spec.iteration, spec.sweep, spec.threads);

    AngularField reference(grid, dirs.q);
    for (int k = 0; k < grid.nx(); ++k) {
      for (int l = 0; l < grid.ny(); ++l) {
        for (int m = 0; m < grid.ne(); ++m) {
          reference.dir(0).at(k, l, m) =
              exact.evaluate({grid.x(k), grid.y(l)}, grid.e(m), dirs.omega[0], 0);
        }
      }
    }

    const DoseField numeric = compute_dose(grid, dirs, psi, bk);
    const DoseField target = compute_dose(grid, dirs, reference, bk);
    const double err = relative_linf_error(numeric, target);

    result.levels.push_back({level.nx, level.ny, level.ne, err});
    sizes.push_back(static_cast<double>(level.nx) * level.ny * level.ne);
    errors.push_back(err);
  }
  result.slope = fit_loglog_slope(sizes, errors);

  CsvWriter out(spec.out_dir / "benchmark_grid_study.csv");
  out.raw_line("Nx,Ny,Ne,max_rel_to_peak");
  for (const Exp1Level& level : result.levels) {
    out.cells(level.nx, level.ny,
              level.ne, level.error);
  }
  return result;
}

Exp2Result run_experiment_2(const StudySpec& spec) {
  const PhaseGrid grid = make_grid(spec, spec.grid);
  const DirectionSet dirs = build_direction_set(spec.q, spec.theta_c, {1.0, 0.0});
  const ScatterKernel kernel{KernelKind::HenyeyGreenstein, spec.sigma_el, spec.gamma};
  const StudySolve sol = solve_study(spec, grid, dirs, kernel, beam_inflow(spec.beam, dirs));

  CsvWriter out(spec.out_dir / "benchmark_finest_iter_history.csv");
  out.raw_line("iter,diff_inf");
  for (const IterationRecord& rec : sol.report.history) {
    out.cells(rec.iter, rec.diff_inf);
  }
  return {sol.report};
}

Exp3Result run_experiment_3(const StudySpec& spec) {
  std::vector<double> gammas = spec.gamma_list;
  if (gammas.empty()) gammas = {0.95, 0.90, 0.85, 0.80};

  const PhaseGrid grid = make_grid(spec, spec.grid);
  const double probe = resolve_x_dagger(spec);

  Exp3Result result;
  for (double gamma : gammas) {
    const DoseField dose = hg_dose(spec, grid, spec.q, spec.theta_c, gamma);
    write_dose_csv(spec.out_dir / ("hg_dose_" + gamma_tag(gamma) + ".csv"), grid, dose);
    result.rows.push_back({gamma, beam_width(grid, dose, probe).width});
  }

  CsvWriter out(spec.out_dir / "hg_beam_widths.csv");
  out.raw_line("gamma,W");
  for (const Exp3Row& row : result.rows) out.cells(row.gamma, row.width);
  return result;
}

Exp4Result run_experiment_4(const StudySpec& spec) {
  std::vector<int> q_list = spec.q_list;
  if (q_list.empty()) q_list = {3, 5, 9, 17, 33, 65};
  if (std::find(q_list.begin(), q_list.end(), spec.q_ref) == q_list.end()) {
    q_list.push_back(spec.q_ref);
  }
  std::vector<double> cone_list = spec.theta_c_list;
  if (cone_list.empty()) {
    const double t = spec.theta_max;
    cone_list = {0.25 * t, 0.5 * t, 0.75 * t, t};
  }

  const PhaseGrid grid = make_grid(spec, spec.grid);
  const double probe = resolve_x_dagger(spec);

  Exp4Result result;

  const DoseField full_ref = cached_reference_dose(spec, grid, spec.grid, spec.q_ref,
                                                   spec.theta_max);
  for (int q : q_list) {
    const DoseField dose = q == spec.q_ref
                               ? full_ref
                               : hg_dose(spec, grid, q, spec.theta_max, spec.gamma);
    result.q_rows.push_back(
        {q, relative_linf_error(dose, full_ref), beam_width(grid, dose, probe).width});
  }

  const DoseField cone_full_ref = cached_reference_dose(spec, grid, spec.grid, spec.q_cone_ref,
                                                        spec.theta_max);
  for (double theta : cone_list) {
    const DoseField dose = hg_dose(spec, grid, spec.q_star, theta, spec.gamma);
    const bool maximal = theta == spec.theta_max;
    const DoseField cone_ref = maximal
                                   ? cone_full_ref
                                   : cached_reference_dose(spec, grid, spec.grid,
                                                           spec.q_cone_ref, theta);
    result.cone_rows.push_back({theta, relative_linf_error(dose, cone_full_ref),
                                relative_linf_error(dose, cone_ref)});
  }

  {
    CsvWriter out(spec.out_dir / "angular_Q_study.csv");
    out.raw_line("Q,E_inf,W");
    for (const Exp4QRow& row : result.q_rows) {
      out.cells(row.q, row.e_inf, row.width);
    }
  }
  {
    CsvWriter out(spec.out_dir / "angular_cone_study.csv");
    out.raw_line("theta_c,E_inf_fullref,E_inf_coneref");
    for (const Exp4ConeRow& row : result.cone_rows) {
      out.cells(row.theta_c, row.e_inf_fullref, row.e_inf_coneref);
    }
  }
  return result;
}

Exp5Result run_experiment_5(const StudySpec& spec) {
  std::vector<double> gammas = spec.gamma_list;
  if (gammas.empty()) gammas = {0.0, 0.7, 0.9, 0.99};

  const PhaseGrid grid = make_grid(spec, spec.grid);
  const DirectionSet dirs = build_direction_set(spec.q, spec.theta_c, {1.0, 0.0});
  const InflowData inflow = beam_inflow(spec.beam, dirs);

  StudySpec sweep_spec = spec;
  sweep_spec.iteration.tol_relative = false;
  sweep_spec.iteration.tol = spec.coupling_tol_abs;

  Exp5Result result;
  for (double gamma : gammas) {
    const ScatterKernel kernel{KernelKind::HenyeyGreenstein, spec.sigma_el, gamma};
    const StudySolve sol = solve_study(sweep_spec, grid, dirs, kernel, inflow);

    CsvWriter history(spec.out_dir / ("SI_gamma_history_" + gamma_tag(gamma) + ".csv"));
    history.raw_line("iter,Delta_inf");
    for (const IterationRecord& rec : sol.report.history) {
      history.cells(rec.iter, rec.diff_inf);
    }

    result.rows.push_back({gamma, static_cast<int>(sol.report.history.size()),
                           sol.report.history.back().diff_inf});
  }

  CsvWriter out(spec.out_dir / "SI_gamma_counts.csv");
  out.raw_line("gamma,n_iter,last_Delta_inf");
  for (const Exp5Row& row : result.rows) {
    out.cells(row.gamma, row.n_iter, row.last_delta_inf);
  }
  return result;
}

}  // namespace ionmoc
