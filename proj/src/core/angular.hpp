// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <vector>

#include "core/energy_function.hpp"
#include "core/grid.hpp"

namespace ionmoc {

// Midpoint rule on Q equal bins of [-theta_c, theta_c] around a unit axis.
// Q is odd so the axis itself is a node; all weights equal 2 theta_c / Q.
struct DirectionSet {
  int q = 0;
  double theta_c = 0.0;
  Vec2 axis{1.0, 0.0};
  std::vector<double> theta;
  std::vector<double> weight;
  std::vector<Vec2> omega;

  int central() const { return (q - 1) / 2; }
  double bin_width() const { return 2.0 * theta_c / q; }
};

DirectionSet build_direction_set(int q, double theta_c, Vec2 axis = {1.0, 0.0});

// Henyey-Greenstein phase function on the circle, normalized to unit
// integral over (-pi, pi].
double hg_phase(double gamma, double theta);

// Mean of the phase function over [center - h/2, center + h/2], adaptive
// Simpson quadrature with absolute tolerance 1e-10 on the bin integral.
double bin_average_phase(double gamma, double center, double h);

enum class KernelKind { Dirac, HenyeyGreenstein, Isotropic };

struct ScatterKernel {
  KernelKind kind = KernelKind::Dirac;
  double sigma_el = 0.0;
  double gamma = 0.0;
};

// Direction-to-direction transfer matrix. Columns are rescaled so that the
// weighted column sums equal sigma_el exactly: scattering removes sigma_el
// per unit path and the matrix re-emits exactly that much, including the
// part the truncated cone would otherwise lose.
struct TransferMatrix {
  int q = 0;
  double sigma_el = 0.0;
  bool dirac = false;
  std::vector<double> coef;  // row-major, coef[i*q + j]
  EnergyFunction sigma_t;    // removal coefficient used by the solver

  double at(int i, int j) const { return coef[static_cast<std::size_t>(i) * q + j]; }
};

TransferMatrix build_transfer_matrix(const ScatterKernel& kernel, const DirectionSet& dirs);

// G_i(node) = sum_j weight_j M[i][j] psi_j(node).
void apply_gain(const TransferMatrix& m, const DirectionSet& dirs, const AngularField& psi,
                AngularField& gain);

// Q x Q values under a header row of the direction angles.
void write_transfer_matrix_csv(const std::filesystem::path& path, const DirectionSet& dirs,
                               const TransferMatrix& m);

}  // namespace ionmoc
