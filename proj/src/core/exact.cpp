// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#include "core/exact.hpp"

#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace ionmoc {

namespace {

struct BackwardHit {
  double s = 0.0;
  EntryFace face = EntryFace::Left;
  Vec2 point{0.0, 0.0};
};

BackwardHit backward_spatial_hit(double x_min, double x_max, double y_min, double y_max,
                                 Vec2 pos, Vec2 omega) {
  double sx = std::numeric_limits<double>::infinity();
  EntryFace fx = EntryFace::Left;
  if (omega.x > 0.0) {
    sx = (pos.x - x_min) / omega.x;
  } else if (omega.x < 0.0) {
    sx = (pos.x - x_max) / omega.x;
    fx = EntryFace::Right;
  }

  double sy = std::numeric_limits<double>::infinity();
  EntryFace fy = EntryFace::Bottom;
  if (omega.y > 0.0) {
    sy = (pos.y - y_min) / omega.y;
  } else if (omega.y < 0.0) {
    sy = (pos.y - y_max) / omega.y;
    fy = EntryFace::Top;
  }

  BackwardHit hit;
  if (sx <= sy) {
    hit.s = std::max(0.0, sx);
    hit.face = fx;
  } else {
    hit.s = std::max(0.0, sy);
    hit.face = fy;
  }
  hit.point = {pos.x - hit.s * omega.x, pos.y - hit.s * omega.y};
  return hit;
}

}  // namespace

ExactBallisticSolution::ExactBallisticSolution(const BraggKleeman& model, double x_min,
                                               double x_max, double y_min, double y_max,
                                               BoundaryProfile profile)
    : model_(model), x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max),
      profile_(std::move(profile)) {
  require(x_min_ < x_max_ && y_min_ < y_max_, ErrorKind::Config,
          "exact solution: degenerate domain rectangle");
  require(static_cast<bool>(profile_), ErrorKind::Config,
          "exact solution: boundary profile is empty");
}

double ExactBallisticSolution::upstream_energy(double e, double s) const {
  const double p = model_.p();
  return std::pow(std::pow(e, p) + s / model_.alpha(), 1.0 / p);
}

double ExactBallisticSolution::evaluate(Vec2 pos, double e, Vec2 omega, int dir_index) const {
  require(e > 0.0, ErrorKind::Numeric, "exact solution: energy must be positive");
  const BackwardHit hit = backward_spatial_hit(x_min_, x_max_, y_min_, y_max_, pos, omega);
  const double e0 = upstream_energy(e, hit.s);
  const double g = profile_(hit.face, hit.point, e0, dir_index);
  if (g == 0.0) return 0.0;
  return std::pow(e0 / e, 1.0 - model_.p()) * g;
}

InflowData ExactBallisticSolution::inflow(const PhaseGrid& grid, const DirectionSet& dirs) const {
  InflowData data;
  data.spatial = profile_;
  const double e_max = grid.e(grid.ne() - 1);
  data.top = [this, e_max, &dirs](Vec2 pos, int dir_index) {
    return evaluate(pos, e_max, dirs.omega[static_cast<std::size_t>(dir_index)], dir_index);
  };
  return data;
}

}  // namespace ionmoc
