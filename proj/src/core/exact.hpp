// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

#include "core/angular.hpp"
#include "core/grid.hpp"
#include "core/stopping.hpp"
#include "core/sweep.hpp"

namespace ionmoc {

// Closed-form solution of the scatter-free slowing-down equation for a
// power-law stopping model on a rectangle, with inflow g prescribed on the
// spatial boundary. The trace runs to the spatial boundary only; the
// upstream energy E0 = (E^p + s/alpha)^(1/p) continues above the top of
// any finite energy window, so g must accept such energies.
//
// S(E) psi(x, E) = S(E0) g(x0, E0) along every characteristic, which makes
// psi = (E0/E)^(1-p) g(x0, E0).
class ExactBallisticSolution {
 public:
  // g(entry face, entry point, upstream energy, direction index).
  using BoundaryProfile = std::function<double(EntryFace, Vec2, double, int)>;

  ExactBallisticSolution(const BraggKleeman& model, double x_min, double x_max, double y_min,
                         double y_max, BoundaryProfile profile);

  double evaluate(Vec2 pos, double e, Vec2 omega, int dir_index) const;

  // Upstream energy after tracing backwards over path length s.
  double upstream_energy(double e, double s) const;

  // Inflow adapter for sweeps over a grid that shares this domain: spatial
  // faces defer to the profile, the top energy face evaluates the solution
  // itself at E_max so the truncated energy window stays consistent.
  InflowData inflow(const PhaseGrid& grid, const DirectionSet& dirs) const;

 private:
  BraggKleeman model_;
  double x_min_, x_max_, y_min_, y_max_;
  BoundaryProfile profile_;
};

}  // namespace ionmoc
