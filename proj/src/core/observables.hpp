// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <vector>

#include "core/angular.hpp"
#include "core/energy_function.hpp"
#include "core/grid.hpp"
#include "core/stopping.hpp"

namespace ionmoc {

// Spatial map, same (x, y) nodes as the phase grid.
class DoseField {
 public:
  DoseField() = default;
  DoseField(int nx, int ny) : nx_(nx), ny_(ny), data_(static_cast<std::size_t>(nx) * ny) {}

  double& at(int k, int l) { return data_[static_cast<std::size_t>(k) * ny_ + l]; }
  double at(int k, int l) const { return data_[static_cast<std::size_t>(k) * ny_ + l]; }

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

 private:
  int nx_ = 0, ny_ = 0;
  std::vector<double> data_;
};

// D(x, y) = sum_E w_E kappa(E) sum_i weight_i psi_i, trapezoid in energy.
DoseField compute_dose(const PhaseGrid& grid, const DirectionSet& dirs,
                       const AngularField& psi, const EnergyFunction& kappa);

// Charged-particle dose deposits the local stopping power.
DoseField compute_dose(const PhaseGrid& grid, const DirectionSet& dirs,
                       const AngularField& psi, const StoppingModel& stopping);

// max |d - ref| / max |ref|.
double relative_linf_error(const DoseField& d, const DoseField& ref);

// Lateral average of the dose over the band |y - y_mid| <= band around the
// domain midline, one value per x node. A non-positive band means one grid
// spacing.
std::vector<std::pair<double, double>> depth_dose(const PhaseGrid& grid,
                                                  const DoseField& dose, double band = 0.0);

struct BeamWidth {
  double center = 0.0;  // first moment of the lateral profile
  double width = 0.0;   // 2 sqrt(variance); a/sqrt(3) for a top-hat of width a
};

// Trapezoid moments of the lateral dose profile at the x node nearest to
// x_probe.
BeamWidth beam_width(const PhaseGrid& grid, const DoseField& dose, double x_probe);

// Writes "x_cm,y_cm,dose" rows, x outer.
void write_dose_csv(const std::filesystem::path& path, const PhaseGrid& grid,
                    const DoseField& dose);
DoseField read_dose_csv(const std::filesystem::path& path, const PhaseGrid& grid);

// Writes "x_cm,D_C,D_P,D_N,D_T" with D_T the component sum.
void write_depth_dose_csv(const std::filesystem::path& path, const std::vector<double>& x,
                          const std::vector<double>& d_c, const std::vector<double>& d_p,
                          const std::vector<double>& d_n);

}  // namespace ionmoc
