// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

#include "core/energy_function.hpp"
#include "core/grid.hpp"
#include "core/stopping.hpp"

namespace ionmoc {

enum class EntryFace { Left, Right, Bottom, Top, EnergyTop };

// Backward trace from a phase-space point: the characteristic leaves the
// domain after path length tau, either through a spatial face or through the
// top of the energy interval, whichever budget runs out first. Ties go to
// the spatial face. e0 is the energy at the entry point.
struct CharacteristicTrace {
  double tau = 0.0;
  double e0 = 0.0;
  Vec2 entry{0.0, 0.0};
  EntryFace face = EntryFace::Left;
};

CharacteristicTrace trace_characteristic(const PhaseGrid& grid, const StoppingModel& stopping,
                                         Vec2 omega, Vec2 pos, double e);

// Boundary data: a function over the spatial faces (evaluated at the traced
// entry energy) and one over the top energy face.
struct InflowData {
  std::function<double(EntryFace, Vec2, double, int)> spatial;
  std::function<double(Vec2, int)> top;
};

InflowData zero_inflow();

// Volumetric source assembled from up to three parts: a per-direction
// gridded field, a direction-shared gridded field with a scale factor, and
// an analytic term. Gridded parts interpolate bilinearly in (x, y) and
// linearly in E, with constant extrapolation outside the grid.
struct VolumetricSource {
  const AngularField* per_dir = nullptr;
  const DirectionalField* shared = nullptr;
  double shared_scale = 1.0;
  std::function<double(Vec2, double, int)> analytic;

  bool empty() const { return !per_dir && !shared && !analytic; }
};

struct SweepParams {
  // Target sample spacing of the source quadrature, as a fraction of the
  // smaller spatial grid spacing.
  double source_step_factor = 0.5;
};

// Integrates one direction over all phase-space nodes. In flux form
// (S psi), the boundary term attenuates by exp(-A(tau)) with
// A(s) = integral of sigma_t along the path, and the source contributes a
// composite-midpoint integral of S(E(s)) exp(A(s) - A(tau)) G(s).
DirectionalField sweep_direction(const PhaseGrid& grid, const StoppingModel& stopping,
                                 const EnergyFunction& sigma_t, Vec2 omega, int dir_index,
                                 const InflowData& inflow, const VolumetricSource& source,
                                 const SweepParams& params);

}  // namespace ionmoc
