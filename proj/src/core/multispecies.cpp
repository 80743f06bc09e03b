// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#include "core/multispecies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/csvio.hpp"
#include "core/error.hpp"
#include "core/parallel.hpp"

namespace ionmoc {

namespace {

double trapezoid_over_energy(const PhaseGrid& grid, const EnergyFunction& f) {
  double acc = 0.0;
  for (int m = 0; m < grid.ne(); ++m) acc += grid.we(m) * f(grid.e(m));
  return acc;
}

double bilinear_slice(const PhaseGrid& grid, const DirectionalField& f, int m, double x,
                      double y) {
  int k;
  int l;
  double tx, ty;
  grid.locate_x(x, k, tx);
  grid.locate_y(y, l, ty);
  const double f00 = f.at(k, l, m), f10 = f.at(k + 1, l, m);
  const double f01 = f.at(k, l + 1, m), f11 = f.at(k + 1, l + 1, m);
  return (1.0 - tx) * ((1.0 - ty) * f00 + ty * f01) + tx * ((1.0 - ty) * f10 + ty * f11);
}

double backward_boundary_distance(const PhaseGrid& grid, Vec2 pos, Vec2 omega) {
  double s = std::numeric_limits<double>::infinity();
  if (omega.x > 0.0) {
    s = std::min(s, (pos.x - grid.x(0)) / omega.x);
  } else if (omega.x < 0.0) {
    s = std::min(s, (pos.x - grid.x(grid.nx() - 1)) / omega.x);
  }
  if (omega.y > 0.0) {
    s = std::min(s, (pos.y - grid.y(0)) / omega.y);
  } else if (omega.y < 0.0) {
    s = std::min(s, (pos.y - grid.y(grid.ny() - 1)) / omega.y);
  }
  return std::max(0.0, s);
}

// Path positions where the backward ray crosses grid lines, bracketed by 0
// and tau. The source is bilinear inside each cell, so 3-point Gauss per
// stretch integrates exp(-sigma s) times it essentially exactly.
std::vector<double> ray_breakpoints(const PhaseGrid& grid, Vec2 pos, Vec2 omega, double tau) {
  std::vector<double> breaks{0.0, tau};
  const double slack = 1e-13 * std::max(tau, 1.0);
  if (omega.x != 0.0) {
    for (int k = 0; k < grid.nx(); ++k) {
      const double s = (pos.x - grid.x(k)) / omega.x;
      if (s > slack && s < tau - slack) breaks.push_back(s);
    }
  }
  if (omega.y != 0.0) {
    for (int l = 0; l < grid.ny(); ++l) {
      const double s = (pos.y - grid.y(l)) / omega.y;
      if (s > slack && s < tau - slack) breaks.push_back(s);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  return breaks;
}

constexpr double kGaussNode = 0.7745966692414834;  // sqrt(3/5)
constexpr double kGaussWeightSide = 5.0 / 9.0;
constexpr double kGaussWeightMid = 8.0 / 9.0;

}  // namespace

EnergyFunction truncated_gaussian_spectrum(double center, double sigma, const PhaseGrid& grid) {
  require(sigma > 0.0, ErrorKind::Config, "spectrum width must be positive");
  const auto shape = [center, sigma](double e) {
    const double t = (e - center) / sigma;
    return std::exp(-0.5 * t * t);
  };
  const double norm = trapezoid_over_energy(grid, EnergyFunction(shape));
  require(norm > 0.0, ErrorKind::Config, "spectrum vanishes on the energy window");
  const double inv = 1.0 / norm;
  return EnergyFunction([shape, inv](double e) { return inv * shape(e); });
}

EnergyFunction uniform_spectrum(const PhaseGrid& grid) {
  const double inv = 1.0 / (grid.e(grid.ne() - 1) - grid.e(0));
  return EnergyFunction(inv);
}

DirectionalField scalar_fluence(const PhaseGrid& grid, const DirectionSet& dirs,
                                const AngularField& psi) {
  require(psi.q() == dirs.q, ErrorKind::Numeric,
          "scalar fluence: field and direction set disagree on Q");
  DirectionalField phi(grid);
  for (int i = 0; i < dirs.q; ++i) {
    const double w = dirs.weight[static_cast<std::size_t>(i)];
    const std::vector<double>& src = psi.dir(i).data();
    std::vector<double>& dst = phi.data();
    for (std::size_t n = 0; n < dst.size(); ++n) dst[n] += w * src[n];
  }
  return phi;
}

DoseField interaction_proxy(const PhaseGrid& grid, const DirectionalField& phi,
                            const EnergyFunction& sigma_nuc) {
  require(phi.nx() == grid.nx() && phi.ny() == grid.ny() && phi.ne() == grid.ne(),
          ErrorKind::Numeric, "interaction proxy: fluence shape does not match the grid");

  std::vector<double> sw(static_cast<std::size_t>(grid.ne()));
  for (int m = 0; m < grid.ne(); ++m) {
    sw[static_cast<std::size_t>(m)] = grid.we(m) * sigma_nuc(grid.e(m));
    require(sw[static_cast<std::size_t>(m)] >= 0.0, ErrorKind::Config,
            "nuclear interaction rate must be non-negative");
  }

  DoseField proxy(grid.nx(), grid.ny());
  for (int k = 0; k < grid.nx(); ++k) {
    for (int l = 0; l < grid.ny(); ++l) {
      double acc = 0.0;
      for (int m = 0; m < grid.ne(); ++m) acc += sw[static_cast<std::size_t>(m)] * phi.at(k, l, m);
      proxy.at(k, l) = acc;
    }
  }
  return proxy;
}

SecondarySource make_secondary_source(const PhaseGrid& species_grid, const DoseField& proxy,
                                      const EnergyFunction& w, double yield, int q) {
  require(yield >= 0.0, ErrorKind::Config, "secondary yield must be non-negative");
  require(q >= 1, ErrorKind::Config, "secondary source needs at least one direction");
  require(proxy.nx() == species_grid.nx() && proxy.ny() == species_grid.ny(), ErrorKind::Numeric,
          "secondary source: proxy shape does not match the species grid");

  std::vector<double> wm(static_cast<std::size_t>(species_grid.ne()));
  double integral = 0.0;
  for (int m = 0; m < species_grid.ne(); ++m) {
    wm[static_cast<std::size_t>(m)] = w(species_grid.e(m));
    require(wm[static_cast<std::size_t>(m)] >= 0.0, ErrorKind::Config,
            "emitted energy density must be non-negative");
    integral += species_grid.we(m) * wm[static_cast<std::size_t>(m)];
  }
  require(std::abs(integral - 1.0) <= 1e-8, ErrorKind::Config,
          "emitted energy density must integrate to 1 over the species window, got " +
              format_double(integral));

  SecondarySource source;
  source.field = DirectionalField(species_grid);
  for (int k = 0; k < species_grid.nx(); ++k) {
    for (int l = 0; l < species_grid.ny(); ++l) {
      const double base = proxy.at(k, l);
      for (int m = 0; m < species_grid.ne(); ++m) {
        source.field.at(k, l, m) = base * wm[static_cast<std::size_t>(m)];
      }
    }
  }
  source.scale = yield / static_cast<double>(q);
  return source;
}

SpeciesSolution solve_carbon_primary(const PhaseGrid& grid, const DirectionSet& dirs,
                                     const BraggKleeman& sweep_law,
                                     const StoppingModel& dose_stopping,
                                     const ScatterKernel& kernel, const InflowData& inflow,
                                     const IterationConfig& iteration, const SweepParams& sweep,
                                     int threads) {
  const TransferMatrix transfer = build_transfer_matrix(kernel, dirs);
  auto [psi, report] = source_iterate(grid, sweep_law, dirs, transfer, inflow, nullptr,
                                      iteration, sweep, threads);
  DoseField dose = compute_dose(grid, dirs, psi, dose_stopping);
  return {std::move(psi), std::move(dose), std::move(report)};
}

SpeciesSolution solve_secondary_proton(const PhaseGrid& grid, const DirectionSet& dirs,
                                       const SecondarySource& source,
                                       const StoppingModel& stopping, const SweepParams& sweep,
                                       int threads) {
  const VolumetricSource vol = source.volumetric();
  const InflowData inflow = zero_inflow();
  AngularField psi(grid, dirs.q);
  parallel_for(dirs.q, threads, [&](int i) {
    psi.dir(i) = sweep_direction(grid, stopping, EnergyFunction(0.0),
                                 dirs.omega[static_cast<std::size_t>(i)], i, inflow, vol, sweep);
  });
  DoseField dose = compute_dose(grid, dirs, psi, stopping);
  return {std::move(psi), std::move(dose), IterationReport{}};
}

SpeciesSolution solve_neutron(const PhaseGrid& grid, const DirectionSet& dirs,
                              const SecondarySource& source, const NeutronModel& model,
                              int threads) {
  std::vector<double> sigma(static_cast<std::size_t>(grid.ne()));
  std::vector<double> kappa(static_cast<std::size_t>(grid.ne()));
  for (int m = 0; m < grid.ne(); ++m) {
    sigma[static_cast<std::size_t>(m)] = model.sigma_t(grid.e(m));
    kappa[static_cast<std::size_t>(m)] = model.kappa(grid.e(m));
    require(sigma[static_cast<std::size_t>(m)] >= 0.0, ErrorKind::Config,
            "neutron removal rate must be non-negative");
    require(kappa[static_cast<std::size_t>(m)] >= 0.0, ErrorKind::Config,
            "neutron kerma coefficient must be non-negative");
  }

  AngularField psi(grid, dirs.q);
  parallel_for(dirs.q, threads, [&](int i) {
    const Vec2 omega = dirs.omega[static_cast<std::size_t>(i)];
    DirectionalField& out = psi.dir(i);
    for (int k = 0; k < grid.nx(); ++k) {
      for (int l = 0; l < grid.ny(); ++l) {
        const Vec2 pos{grid.x(k), grid.y(l)};
        const double tau = backward_boundary_distance(grid, pos, omega);
        if (tau <= 0.0) {
          for (int m = 0; m < grid.ne(); ++m) out.at(k, l, m) = 0.0;
          continue;
        }
        const std::vector<double> breaks = ray_breakpoints(grid, pos, omega, tau);
        for (int m = 0; m < grid.ne(); ++m) {
          const double sig = sigma[static_cast<std::size_t>(m)];
          double acc = 0.0;
          for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
            const double half = 0.5 * (breaks[b + 1] - breaks[b]);
            if (half <= 0.0) continue;
            const double mid = 0.5 * (breaks[b] + breaks[b + 1]);
            const double s_nodes[3] = {mid - half * kGaussNode, mid, mid + half * kGaussNode};
            const double s_weights[3] = {kGaussWeightSide * half, kGaussWeightMid * half,
                                         kGaussWeightSide * half};
            for (int n = 0; n < 3; ++n) {
              const double s = s_nodes[n];
              const double q = bilinear_slice(grid, source.field, m, pos.x - s * omega.x,
                                              pos.y - s * omega.y);
              acc += s_weights[n] * std::exp(-sig * s) * q;
            }
          }
          out.at(k, l, m) = source.scale * acc;
        }
      }
    }
  });

  DoseField dose = compute_dose(grid, dirs, psi, EnergyFunction([&model](double e) {
                                  return model.kappa(e);
                                }));
  return {std::move(psi), std::move(dose), IterationReport{}};
}

Exp6Result run_experiment_6(const MultispeciesConfig& cfg) {
  const PhaseGrid grid(cfg.carbon_grid);
  const DirectionSet dirs = build_direction_set(cfg.q, cfg.theta_c, {1.0, 0.0});

  const RangeEnergyTable table = load_range_table(cfg.carbon_table);
  const double lo = cfg.fit_lo > 0.0 ? cfg.fit_lo : cfg.carbon_grid.e_min;
  const double hi = cfg.fit_hi > 0.0 ? cfg.fit_hi : cfg.carbon_grid.e_max;
  const BraggKleeman sweep_law = fit_bragg_kleeman(table, lo, hi);
  const TabulatedStopping dose_stopping = fit_tabulated_stopping(table, lo, hi);

  const SpeciesSolution carbon =
      solve_carbon_primary(grid, dirs, sweep_law, dose_stopping, cfg.kernel,
                           beam_inflow(cfg.beam, dirs), cfg.iteration, cfg.sweep, cfg.threads);

  const DirectionalField phi = scalar_fluence(grid, dirs, carbon.psi);
  const DoseField proxy = interaction_proxy(grid, phi, EnergyFunction(cfg.sigma_nuc));

  GridSpec proton_spec = cfg.carbon_grid;
  proton_spec.e_min = cfg.proton_e_min;
  proton_spec.e_max = cfg.proton_e_max;
  proton_spec.ne = cfg.proton_ne;
  const PhaseGrid proton_grid(proton_spec);
  const SecondarySource proton_source = make_secondary_source(
      proton_grid, proxy, truncated_gaussian_spectrum(cfg.wp_center, cfg.wp_sigma, proton_grid),
      cfg.yield_p, dirs.q);
  const BraggKleeman proton_stopping(cfg.proton_alpha, cfg.proton_p);
  const SpeciesSolution proton = solve_secondary_proton(proton_grid, dirs, proton_source,
                                                        proton_stopping, cfg.sweep, cfg.threads);

  GridSpec neutron_spec = cfg.carbon_grid;
  neutron_spec.e_min = cfg.neutron_e_min;
  neutron_spec.e_max = cfg.neutron_e_max;
  neutron_spec.ne = cfg.neutron_ne;
  const PhaseGrid neutron_grid(neutron_spec);
  const SecondarySource neutron_source = make_secondary_source(
      neutron_grid, proxy, uniform_spectrum(neutron_grid), cfg.yield_n, dirs.q);
  const NeutronModel neutron_model{EnergyFunction(cfg.neutron_sigma_t),
                                   EnergyFunction(cfg.neutron_kappa)};
  const SpeciesSolution neutron = solve_neutron(neutron_grid, dirs, neutron_source,
                                                neutron_model, cfg.threads);

  write_dose_csv(cfg.out_dir / "carbon_dose.csv", grid, carbon.dose);
  write_dose_csv(cfg.out_dir / "proton_dose.csv", proton_grid, proton.dose);
  write_dose_csv(cfg.out_dir / "neutron_dose.csv", neutron_grid, neutron.dose);

  const auto profile_c = depth_dose(grid, carbon.dose);
  const auto profile_p = depth_dose(proton_grid, proton.dose);
  const auto profile_n = depth_dose(neutron_grid, neutron.dose);

  Exp6Result result;
  result.carbon_report = carbon.report;
  result.predicted_peak_depth =
      sweep_law.range(cfg.beam.e_beam) - sweep_law.range(cfg.carbon_grid.e_min);
  for (std::size_t n = 0; n < profile_c.size(); ++n) {
    result.x.push_back(profile_c[n].first);
    result.d_c.push_back(profile_c[n].second);
    result.d_p.push_back(profile_p[n].second);
    result.d_n.push_back(profile_n[n].second);
  }
  std::size_t peak = 0;
  for (std::size_t n = 1; n < result.d_c.size(); ++n) {
    if (result.d_c[n] > result.d_c[peak]) peak = n;
  }
  result.carbon_peak_x = result.x[peak];

  write_depth_dose_csv(cfg.out_dir / "carbon_multispecies_depth_dose.csv", result.x, result.d_c,
                       result.d_p, result.d_n);
  return result;
}

}  // namespace ionmoc
