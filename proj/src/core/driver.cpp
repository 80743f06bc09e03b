// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#include "core/driver.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "core/config.hpp"
#include "core/csvio.hpp"
#include "core/experiments.hpp"
#include "core/multispecies.hpp"

namespace ionmoc {

namespace {

constexpr double kPi = 3.141592653589793;

enum class Command { Bench, Iterate, Hg, Angular, Coupling, Carbon, Validate };

Command parse_command(const std::string& name) {
  if (name == "bench") return Command::Bench;
  if (name == "iterate") return Command::Iterate;
  if (name == "hg") return Command::Hg;
  if (name == "angular") return Command::Angular;
  if (name == "coupling") return Command::Coupling;
  if (name == "carbon") return Command::Carbon;
  if (name == "validate") return Command::Validate;
  throw Error::config("unknown subcommand '" + name + "'");
}

std::filesystem::path default_out_dir(Command cmd) {
  switch (cmd) {
    case Command::Bench:
    case Command::Iterate:
      return "experiment1output";
    case Command::Hg:
      return "experiment3output";
    case Command::Angular:
      return "experiment4output";
    case Command::Coupling:
      return "experiment5output";
    default:
      return "experiment6output";
  }
}

void check(bool ok, const std::string& msg) {
  if (!ok) throw Error::config(msg);
}

std::vector<GridLevel> parse_levels(const std::string& text, const std::string& key) {
  std::vector<GridLevel> levels;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    GridLevel level;
    char sep1 = 0, sep2 = 0;
    std::istringstream node(item);
    node >> level.nx >> sep1 >> level.ny >> sep2 >> level.ne;
    if (!node || sep1 != 'x' || sep2 != 'x' || (node >> std::ws, !node.eof())) {
      throw Error::config("key '" + key + "': expected NXxNYxNE triplets, got '" + item +
                          "'");
    }
    check(level.nx >= 2 && level.ny >= 2 && level.ne >= 2,
          "key '" + key + "': every grid extent needs at least 2 nodes");
    levels.push_back(level);
  }
  check(!levels.empty(), "key '" + key + "': empty level list");
  return levels;
}

void read_window(ConfigMap& cfg, double& x_min, double& x_max, double& y_min,
                 double& y_max, double& e_min, double& e_max) {
  x_min = cfg.get_double("grid.x_min", x_min);
  x_max = cfg.get_double("grid.x_max", x_max);
  y_min = cfg.get_double("grid.y_min", y_min);
  y_max = cfg.get_double("grid.y_max", y_max);
  e_min = cfg.get_double("grid.e_min", e_min);
  e_max = cfg.get_double("grid.e_max", e_max);
  check(x_min < x_max, "grid.x_min must be below grid.x_max");
  check(y_min < y_max, "grid.y_min must be below grid.y_max");
  check(e_min > 0.0, "grid.e_min must be positive");
  check(e_min < e_max, "grid.e_min must be below grid.e_max");
}

void read_extents(ConfigMap& cfg, int& nx, int& ny, int& ne) {
  nx = cfg.get_int("grid.nx", nx);
  ny = cfg.get_int("grid.ny", ny);
  ne = cfg.get_int("grid.ne", ne);
  check(nx >= 2, "grid.nx must be at least 2");
  check(ny >= 2, "grid.ny must be at least 2");
  check(ne >= 2, "grid.ne must be at least 2");
}

void read_angle_counts(ConfigMap& cfg, int& q, double& theta_c) {
  q = cfg.get_int("angular.Q", q);
  theta_c = cfg.get_double("angular.theta_c", theta_c);
  check(q >= 1 && q % 2 == 1,
        "angular.Q must be a positive odd integer, got " + std::to_string(q));
  check(theta_c > 0.0 && theta_c <= kPi, "angular.theta_c must lie in (0, pi]");
}

void read_iteration(ConfigMap& cfg, IterationConfig& it) {
  it.tol = cfg.get_double("iteration.tol", it.tol);
  it.tol_relative = cfg.get_bool("iteration.tol_relative", it.tol_relative);
  it.n_max = cfg.get_int("iteration.n_max", it.n_max);
  const std::string diag = cfg.get_string("iteration.diagnostic", "delta_inf");
  if (diag == "delta_inf") {
    it.diagnostic = DiagnosticKind::DeltaInf;
  } else if (diag == "weighted_l2") {
    it.diagnostic = DiagnosticKind::WeightedL2;
  } else {
    throw Error::config("key 'iteration.diagnostic': expected delta_inf or weighted_l2, got '" +
                        diag + "'");
  }
  check(it.tol > 0.0, "iteration.tol must be positive");
  check(it.n_max >= 1, "iteration.n_max must be at least 1");
}

void read_beam(ConfigMap& cfg, BeamModel& beam) {
  beam.e_beam = cfg.get_double("beam.energy", beam.e_beam);
  beam.sigma_e = cfg.get_double("beam.sigma_e", beam.sigma_e);
  beam.y_center = cfg.get_double("beam.y_center", beam.y_center);
  beam.sigma_y = cfg.get_double("beam.sigma_y", beam.sigma_y);
  beam.amplitude = cfg.get_double("beam.amplitude", beam.amplitude);
  check(beam.e_beam > 0.0, "beam.energy must be positive");
  check(beam.sigma_e > 0.0, "beam.sigma_e must be positive");
  check(beam.sigma_y > 0.0, "beam.sigma_y must be positive");
  check(beam.amplitude > 0.0, "beam.amplitude must be positive");
}

void read_step_factor(ConfigMap& cfg, SweepParams& sweep) {
  sweep.source_step_factor =
      cfg.get_double("moc.source_step_factor", sweep.source_step_factor);
  check(sweep.source_step_factor > 0.0, "moc.source_step_factor must be positive");
}

StudySpec build_study(ConfigMap& cfg, Command cmd) {
  StudySpec spec;
  read_window(cfg, spec.x_min, spec.x_max, spec.y_min, spec.y_max, spec.e_min,
              spec.e_max);

  if (cmd == Command::Bench) {
    spec.grid_levels = parse_levels(
        cfg.get_string("grid.levels", "9x9x5, 17x17x9, 33x33x17, 65x65x33"),
        "grid.levels");
  } else if (cmd == Command::Angular) {
    // The ordinate study runs dozens of solves including the dense
    // reference, so its desk grid is one notch lighter.
    spec.grid = {25, 25, 13};
    read_extents(cfg, spec.grid.nx, spec.grid.ny, spec.grid.ne);
  } else {
    read_extents(cfg, spec.grid.nx, spec.grid.ny, spec.grid.ne);
  }

  spec.alpha = cfg.get_double("physics.alpha", spec.alpha);
  spec.p = cfg.get_double("physics.p", spec.p);
  spec.sigma_el = cfg.get_double("physics.sigma_el", spec.sigma_el);
  spec.gamma = cfg.get_double("physics.gamma", spec.gamma);
  check(spec.alpha > 0.0, "physics.alpha must be positive");
  check(spec.p > 0.0, "physics.p must be positive");
  check(spec.sigma_el >= 0.0, "physics.sigma_el must be non-negative");
  check(std::abs(spec.gamma) < 1.0, "physics.gamma must lie in (-1, 1)");

  read_angle_counts(cfg, spec.q, spec.theta_c);

  if (cmd == Command::Angular) {
    spec.q_list = cfg.get_int_list("angular.Q_list", "3, 5, 9, 17, 33, 65");
    for (int q : spec.q_list) {
      check(q >= 1 && q % 2 == 1,
            "angular.Q_list entries must be positive odd integers, got " +
                std::to_string(q));
    }
    spec.q_ref = cfg.get_int("angular.Q_ref", spec.q_ref);
    spec.q_star = cfg.get_int("angular.Q_star", spec.q_star);
    spec.q_cone_ref = cfg.get_int("angular.Q_cone_ref", spec.q_cone_ref);
    const std::pair<const char*, int> refs[] = {{"angular.Q_ref", spec.q_ref},
                                                {"angular.Q_star", spec.q_star},
                                                {"angular.Q_cone_ref", spec.q_cone_ref}};
    for (const auto& [key, q] : refs) {
      check(q >= 1 && q % 2 == 1,
            std::string(key) + " must be a positive odd integer, got " + std::to_string(q));
    }
    spec.theta_max = cfg.get_double("angular.theta_max", spec.theta_max);
    check(spec.theta_max > 0.0 && spec.theta_max <= kPi,
          "angular.theta_max must lie in (0, pi]");
    spec.theta_c_list = cfg.get_double_list(
        "angular.theta_c_list",
        "0.39269908169872414, 0.7853981633974483, 1.1780972450961724, "
        "1.5707963267948966");
    for (double t : spec.theta_c_list) {
      check(t > 0.0 && t <= spec.theta_max,
            "angular.theta_c_list entries must lie in (0, angular.theta_max]");
    }
  }

  if (cmd == Command::Hg) {
    spec.gamma_list = cfg.get_double_list("physics.gamma_list", "0.95, 0.9, 0.85, 0.8");
  } else if (cmd == Command::Coupling) {
    spec.gamma_list = cfg.get_double_list("physics.gamma_list", "0, 0.7, 0.9, 0.99");
    spec.coupling_tol_abs = cfg.get_double("iteration.tol_abs", 3e-9);
    check(spec.coupling_tol_abs > 0.0, "iteration.tol_abs must be positive, got " +
                                           format_double(spec.coupling_tol_abs));
  }
  for (double g : spec.gamma_list) {
    check(std::abs(g) < 1.0, "physics.gamma_list entries must lie in (-1, 1)");
  }

  if (cmd == Command::Hg || cmd == Command::Angular) {
    spec.x_dagger = cfg.get_double("observables.x_dagger", 0.0);
  }

  read_iteration(cfg, spec.iteration);
  read_beam(cfg, spec.beam);
  read_step_factor(cfg, spec.sweep);
  return spec;
}

MultispeciesConfig build_multispecies(ConfigMap& cfg) {
  MultispeciesConfig mc;
  read_window(cfg, mc.carbon_grid.x_min, mc.carbon_grid.x_max, mc.carbon_grid.y_min,
              mc.carbon_grid.y_max, mc.carbon_grid.e_min, mc.carbon_grid.e_max);
  read_extents(cfg, mc.carbon_grid.nx, mc.carbon_grid.ny, mc.carbon_grid.ne);

  mc.carbon_table = cfg.require_string("multispecies.carbon_table");
  mc.fit_lo = cfg.get_double("multispecies.fit_lo", mc.fit_lo);
  mc.fit_hi = cfg.get_double("multispecies.fit_hi", mc.fit_hi);

  read_angle_counts(cfg, mc.q, mc.theta_c);

  const std::string kernel = cfg.get_string("physics.kernel", "hg");
  if (kernel == "hg") {
    mc.kernel.kind = KernelKind::HenyeyGreenstein;
  } else if (kernel == "dirac") {
    mc.kernel.kind = KernelKind::Dirac;
  } else if (kernel == "isotropic") {
    mc.kernel.kind = KernelKind::Isotropic;
  } else {
    throw Error::config("key 'physics.kernel': expected hg, dirac, or isotropic, got '" +
                        kernel + "'");
  }
  mc.kernel.sigma_el = cfg.get_double("physics.sigma_el", mc.kernel.sigma_el);
  mc.kernel.gamma = cfg.get_double("physics.gamma", mc.kernel.gamma);
  check(mc.kernel.sigma_el >= 0.0, "physics.sigma_el must be non-negative");
  check(std::abs(mc.kernel.gamma) < 1.0, "physics.gamma must lie in (-1, 1)");

  read_beam(cfg, mc.beam);

  mc.sigma_nuc = cfg.get_double("multispecies.sigma_nuc", mc.sigma_nuc);
  mc.yield_p = cfg.get_double("multispecies.yield_p", mc.yield_p);
  mc.yield_n = cfg.get_double("multispecies.yield_n", mc.yield_n);
  check(mc.sigma_nuc >= 0.0, "multispecies.sigma_nuc must be non-negative");
  check(mc.yield_p >= 0.0, "multispecies.yield_p must be non-negative");
  check(mc.yield_n >= 0.0, "multispecies.yield_n must be non-negative");

  mc.proton_alpha = cfg.get_double("multispecies.proton_alpha", mc.proton_alpha);
  mc.proton_p = cfg.get_double("multispecies.proton_p", mc.proton_p);
  mc.proton_e_min = cfg.get_double("multispecies.proton_e_min", mc.proton_e_min);
  mc.proton_e_max = cfg.get_double("multispecies.proton_e_max", mc.proton_e_max);
  mc.proton_ne = cfg.get_int("multispecies.proton_ne", mc.proton_ne);
  check(mc.proton_alpha > 0.0, "multispecies.proton_alpha must be positive");
  check(mc.proton_p > 0.0, "multispecies.proton_p must be positive");
  check(mc.proton_e_min > 0.0 && mc.proton_e_min < mc.proton_e_max,
        "multispecies.proton_e_min must be positive and below multispecies.proton_e_max");
  check(mc.proton_ne >= 2, "multispecies.proton_ne must be at least 2");

  mc.wp_center = cfg.get_double("multispecies.wp_center", mc.wp_center);
  mc.wp_sigma = cfg.get_double("multispecies.wp_sigma", mc.wp_sigma);
  check(mc.wp_sigma > 0.0, "multispecies.wp_sigma must be positive");

  mc.neutron_e_min = cfg.get_double("multispecies.neutron_e_min", mc.neutron_e_min);
  mc.neutron_e_max = cfg.get_double("multispecies.neutron_e_max", mc.neutron_e_max);
  mc.neutron_ne = cfg.get_int("multispecies.neutron_ne", mc.neutron_ne);
  mc.neutron_sigma_t = cfg.get_double("multispecies.neutron_sigma_t", mc.neutron_sigma_t);
  mc.neutron_kappa = cfg.get_double("multispecies.neutron_kappa", mc.neutron_kappa);
  check(mc.neutron_e_min > 0.0 && mc.neutron_e_min < mc.neutron_e_max,
        "multispecies.neutron_e_min must be positive and below multispecies.neutron_e_max");
  check(mc.neutron_ne >= 2, "multispecies.neutron_ne must be at least 2");
  check(mc.neutron_sigma_t >= 0.0, "multispecies.neutron_sigma_t must be non-negative");
  check(mc.neutron_kappa >= 0.0, "multispecies.neutron_kappa must be non-negative");

  read_iteration(cfg, mc.iteration);
  read_step_factor(cfg, mc.sweep);
  return mc;
}

// Builds every object the run would build, without solving. Constructor
// invariants catch whatever the key-level checks above did not.
void validate_study(const StudySpec& spec, Command cmd) {
  GridSpec gs{spec.x_min, spec.x_max, spec.y_min, spec.y_max,
              spec.e_min, spec.e_max, 0,          0,          0};
  if (cmd == Command::Bench) {
    for (const GridLevel& level : spec.grid_levels) {
      gs.nx = level.nx;
      gs.ny = level.ny;
      gs.ne = level.ne;
      PhaseGrid probe(gs);
    }
  } else {
    gs.nx = spec.grid.nx;
    gs.ny = spec.grid.ny;
    gs.ne = spec.grid.ne;
    PhaseGrid probe(gs);
  }
  build_direction_set(spec.q, spec.theta_c);
  if (cmd == Command::Angular) {
    for (int q : spec.q_list) build_direction_set(q, spec.theta_max);
    build_direction_set(spec.q_ref, spec.theta_max);
    build_direction_set(spec.q_cone_ref, spec.theta_max);
    for (double t : spec.theta_c_list) build_direction_set(spec.q_star, t);
  }
  const BraggKleeman law(spec.alpha, spec.p);
  (void)law;
}

void validate_carbon(const MultispeciesConfig& mc) {
  const PhaseGrid grid(mc.carbon_grid);
  build_direction_set(mc.q, mc.theta_c);

  const RangeEnergyTable table = load_range_table(mc.carbon_table);
  const double lo = mc.fit_lo > 0.0 ? mc.fit_lo : mc.carbon_grid.e_min;
  const double hi = mc.fit_hi > 0.0 ? mc.fit_hi : mc.carbon_grid.e_max;
  fit_bragg_kleeman(table, lo, hi);
  fit_tabulated_stopping(table, lo, hi);

  GridSpec ps = mc.carbon_grid;
  ps.e_min = mc.proton_e_min;
  ps.e_max = mc.proton_e_max;
  ps.ne = mc.proton_ne;
  const PhaseGrid proton_grid(ps);
  truncated_gaussian_spectrum(mc.wp_center, mc.wp_sigma, proton_grid);
  const BraggKleeman proton_law(mc.proton_alpha, mc.proton_p);
  (void)proton_law;

  GridSpec ns = mc.carbon_grid;
  ns.e_min = mc.neutron_e_min;
  ns.e_max = mc.neutron_e_max;
  ns.ne = mc.neutron_ne;
  const PhaseGrid neutron_grid(ns);
  uniform_spectrum(neutron_grid);
}

void write_metadata(const std::filesystem::path& out_dir, const DriverOptions& opt,
                    const ConfigMap& cfg, int threads, double seconds) {
  const std::filesystem::path path = out_dir / "run_metadata";
  ensure_parent_dir(path);
  std::ofstream out(path);
  if (!out) throw Error::io("cannot write " + path.string());
  out << "version = " << kVersion << "\n";
  out << "subcommand = " << opt.subcommand << "\n";
  out << "config_file = " << opt.config_path.string() << "\n";
  out << "out_dir = " << out_dir.string() << "\n";
  out << "threads = " << threads << "\n";
  out << "wall_seconds = " << format_double(seconds) << "\n";
  for (const auto& [key, value] : cfg.entries()) {
    out << "config." << key << " = " << value << "\n";
  }
  for (const auto& [key, value] : cfg.materialized()) {
    out << "default." << key << " = " << value << "\n";
  }
  if (!out) throw Error::io("cannot write " + path.string());
}

}  // namespace

void run_driver(const DriverOptions& options) {
  const Command cmd = parse_command(options.subcommand);
  if (!std::filesystem::exists(options.config_path)) {
    throw Error::io("config file not found: " + options.config_path.string());
  }
  ConfigMap cfg = ConfigMap::from_file(options.config_path);

  Command effective = cmd;
  if (cmd == Command::Validate) {
    if (!cfg.has("run.experiment")) {
      throw Error::config(
          "validate needs run.experiment = "
          "<bench|iterate|hg|angular|coupling|carbon> to pick the key vocabulary");
    }
    effective = parse_command(cfg.require_string("run.experiment"));
    check(effective != Command::Validate, "run.experiment cannot be 'validate'");
  } else if (cfg.has("run.experiment")) {
    const std::string tag = cfg.require_string("run.experiment");
    check(parse_command(tag) == cmd, "run.experiment is '" + tag +
                                         "' but the subcommand is '" +
                                         options.subcommand + "'");
  }

  int threads = cfg.get_int("run.threads", 1);
  if (options.threads > 0) threads = options.threads;
  check(threads >= 1, "run.threads must be at least 1");
  if (cfg.has("run.seed")) cfg.require_int("run.seed");

  std::filesystem::path out_dir =
      cfg.get_string("output.dir", default_out_dir(effective).string());
  if (!options.out_dir.empty()) out_dir = options.out_dir;

  const auto t0 = std::chrono::steady_clock::now();
  if (effective == Command::Carbon) {
    MultispeciesConfig mc = build_multispecies(cfg);
    mc.threads = threads;
    mc.out_dir = out_dir;
    cfg.finish();
    if (cmd == Command::Validate) {
      validate_carbon(mc);
      return;
    }
    run_experiment_6(mc);
  } else {
    StudySpec spec = build_study(cfg, effective);
    spec.threads = threads;
    spec.out_dir = out_dir;
    cfg.finish();
    if (cmd == Command::Validate) {
      validate_study(spec, effective);
      return;
    }
    switch (effective) {
      case Command::Bench:
        run_experiment_1(spec);
        break;
      case Command::Iterate:
        run_experiment_2(spec);
        break;
      case Command::Hg:
        run_experiment_3(spec);
        break;
      case Command::Angular:
        run_experiment_4(spec);
        break;
      default:
        run_experiment_5(spec);
        break;
    }
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;
  write_metadata(out_dir, options, cfg, threads, elapsed.count());
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
      return 1;
    case ErrorKind::Io:
      return 3;
    default:
      return 2;
  }
}

}  // namespace ionmoc
