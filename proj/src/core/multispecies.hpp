// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <vector>

#include "core/angular.hpp"
#include "core/energy_function.hpp"
#include "core/experiments.hpp"
#include "core/grid.hpp"
#include "core/iteration.hpp"
#include "core/observables.hpp"
#include "core/stopping.hpp"
#include "core/sweep.hpp"

namespace ionmoc {

// Production model for secondaries born from the primary beam: a nuclear
// interaction rate, per-species yields, and normalized emitted-energy
// densities. Emission is isotropic over the direction set (1/Q each).
struct SecondarySourceSpec {
  EnergyFunction sigma_nuc;
  double yield_p = 0.0;
  double yield_n = 0.0;
  EnergyFunction w_p;
  EnergyFunction w_n;
};

// Streaming-removal transport closure for neutrons: removal rate and kerma
// coefficient, both per neutron energy.
struct NeutronModel {
  EnergyFunction sigma_t;
  EnergyFunction kappa;
};

// Gaussian restricted to the grid's energy window, rescaled so its trapezoid
// integral over the window is exactly 1.
EnergyFunction truncated_gaussian_spectrum(double center, double sigma, const PhaseGrid& grid);

// 1 / (E_max - E_min) on the grid's energy window.
EnergyFunction uniform_spectrum(const PhaseGrid& grid);

// Phi(x, E) = sum_i weight_i Psi_i(x, E).
DirectionalField scalar_fluence(const PhaseGrid& grid, const DirectionSet& dirs,
                                const AngularField& psi);

// I(x) = integral over E of sigma_nuc(E) Phi(x, E), trapezoid rule.
DoseField interaction_proxy(const PhaseGrid& grid, const DirectionalField& phi,
                            const EnergyFunction& sigma_nuc);

// Separable source Q_i(x, E) = yield * I(x) * w(E) / Q on the species grid,
// stored as a shared field I(x) w(E) plus the scale yield / Q.
struct SecondarySource {
  DirectionalField field;
  double scale = 0.0;

  VolumetricSource volumetric() const { return {nullptr, &field, scale, {}}; }
};

SecondarySource make_secondary_source(const PhaseGrid& species_grid, const DoseField& proxy,
                                      const EnergyFunction& w, double yield, int q);

struct SpeciesSolution {
  AngularField psi;
  DoseField dose;
  IterationReport report;
};

// Source-iterated primary solve where the characteristic map uses the
// fitted power law while the dose deposits the tabulated stopping power.
SpeciesSolution solve_carbon_primary(const PhaseGrid& grid, const DirectionSet& dirs,
                                     const BraggKleeman& sweep_law,
                                     const StoppingModel& dose_stopping,
                                     const ScatterKernel& kernel, const InflowData& inflow,
                                     const IterationConfig& iteration, const SweepParams& sweep,
                                     int threads);

// Ionisation loss only: one sweep per direction, no inflow, no iteration.
SpeciesSolution solve_secondary_proton(const PhaseGrid& grid, const DirectionSet& dirs,
                                       const SecondarySource& source,
                                       const StoppingModel& stopping, const SweepParams& sweep,
                                       int threads);

// No energy coupling: per direction and energy node, the attenuated line
// integral of the source along the incoming ray, integrated cell by cell
// with 3-point Gauss rules.
SpeciesSolution solve_neutron(const PhaseGrid& grid, const DirectionSet& dirs,
                              const SecondarySource& source, const NeutronModel& model,
                              int threads);

struct MultispeciesConfig {
  GridSpec carbon_grid{0.0, 6.0, 0.0, 4.0, 5.0, 120.0, 49, 17, 65};
  std::filesystem::path carbon_table;
  double fit_lo = 0.0, fit_hi = 0.0;  // <= 0 means the grid energy window
  int q = 9;
  double theta_c = 1.5707963267948966;
  ScatterKernel kernel{KernelKind::HenyeyGreenstein, 0.03, 0.95};
  BeamModel beam{100.0, 2.0, 2.0, 0.35, 1.0};

  double sigma_nuc = 0.03;
  double yield_p = 0.05;
  double yield_n = 0.05;
  double proton_alpha = 2.147e-3;
  double proton_p = 1.777;
  double proton_e_min = 1.0, proton_e_max = 40.0;
  int proton_ne = 9;
  double wp_center = 20.0, wp_sigma = 6.0;
  double neutron_e_min = 1.0, neutron_e_max = 20.0;
  int neutron_ne = 5;
  double neutron_sigma_t = 0.2;
  double neutron_kappa = 0.05;

  IterationConfig iteration;
  SweepParams sweep;
  int threads = 1;
  std::filesystem::path out_dir;
};

struct Exp6Result {
  double carbon_peak_x = 0.0;
  double predicted_peak_depth = 0.0;
  std::vector<double> x;
  std::vector<double> d_c, d_p, d_n;
  IterationReport carbon_report;
};

// Carbon solve, then the one-way chain into proton and neutron secondaries;
// emits per-species dose maps and carbon_multispecies_depth_dose.csv.
Exp6Result run_experiment_6(const MultispeciesConfig& cfg);

}  // namespace ionmoc
