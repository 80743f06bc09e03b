// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include "core/error.hpp"
#include "core/stopping.hpp"
#include "core/sweep.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace ionmoc;

namespace {

PhaseGrid small_grid(double e_min = 1.0, double e_max = 100.0, int nx = 9, int ny = 5,
                     int ne = 5) {
  return PhaseGrid({0.0, 4.0, 0.0, 4.0, e_min, e_max, nx, ny, ne});
}

InflowData left_face_const(double c) {
  InflowData g;
  g.spatial = [c](EntryFace face, Vec2, double, int) {
    return face == EntryFace::Left ? c : 0.0;
  };
  g.top = [](Vec2, int) { return 0.0; };
  return g;
}

}  // namespace

TEST_CASE("backward trace solves the range equation") {
  PhaseGrid grid = small_grid();
  BraggKleeman bk(0.01, 2.0);
  auto t = trace_characteristic(grid, bk, {1.0, 0.0}, {0.005, 2.0}, 1.0);
  CHECK(t.tau == doctest::Approx(0.005).epsilon(1e-14));
  CHECK(t.face == EntryFace::Left);
  CHECK(t.e0 == doctest::Approx(1.224744871392).epsilon(1e-12));
  CHECK(t.entry.x == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(t.entry.y == 2.0);
}

TEST_CASE("trace at the boundary returns the point itself") {
  PhaseGrid grid = small_grid();
  BraggKleeman bk(0.01, 2.0);
  auto t = trace_characteristic(grid, bk, {1.0, 0.0}, {0.0, 2.0}, 1.0);
  CHECK(t.tau == 0.0);
  CHECK(t.e0 == 1.0);
}

TEST_CASE("linear range law shifts energy proportionally to path length") {
  PhaseGrid grid = small_grid();
  BraggKleeman bk(0.01, 1.0);
  auto t = trace_characteristic(grid, bk, {1.0, 0.0}, {0.005, 2.0}, 1.0);
  CHECK(t.e0 == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("short energy budget enters through the top energy face") {
  PhaseGrid grid = small_grid();
  BraggKleeman bk(0.01, 2.0);
  double e = 99.9;
  double tau_e = bk.range(100.0) - bk.range(e);
  auto t = trace_characteristic(grid, bk, {1.0, 0.0}, {1.0, 2.0}, e);
  CHECK(t.face == EntryFace::EnergyTop);
  CHECK(t.tau == doctest::Approx(tau_e).epsilon(1e-12));
  CHECK(t.e0 == 100.0);
  CHECK(t.entry.x == doctest::Approx(1.0 - tau_e).epsilon(1e-12));
}

TEST_CASE("trace validates its inputs") {
  PhaseGrid grid = small_grid();
  BraggKleeman bk(0.01, 2.0);
  CHECK_THROWS_AS(trace_characteristic(grid, bk, {0.5, 0.0}, {1.0, 2.0}, 1.0), Error);
  CHECK_THROWS_AS(trace_characteristic(grid, bk, {1.0, 0.0}, {1.0, 2.0}, 0.0), Error);
}

TEST_CASE("zero data sweeps to a zero field") {
  PhaseGrid grid = small_grid();
  BraggKleeman bk(2.147e-3, 1.777);
  DirectionalField f = sweep_direction(grid, bk, EnergyFunction(0.3), {1.0, 0.0}, 0,
                                       zero_inflow(), {}, {});
  for (double v : f.data()) CHECK(v == 0.0);
}

TEST_CASE("streaming without losses preserves the flux invariant") {
  PhaseGrid grid = small_grid(2.0, 86.0);
  BraggKleeman bk(2.147e-3, 1.777);
  DirectionalField f = sweep_direction(grid, bk, EnergyFunction(0.0), {1.0, 0.0}, 0,
                                       left_face_const(3.0), {}, {});
  for (int k = 0; k < grid.nx(); ++k) {
    for (int m = 0; m < grid.ne(); ++m) {
      double e = grid.e(m);
      auto t = trace_characteristic(grid, bk, {1.0, 0.0}, {grid.x(k), grid.y(2)}, e);
      double expect = t.face == EntryFace::EnergyTop
                          ? 0.0
                          : 3.0 * bk.stopping(t.e0) / bk.stopping(e);
      CHECK(f.at(k, 2, m) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
  CHECK(f.at(0, 2, 0) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("constant removal attenuates the boundary term exponentially") {
  PhaseGrid grid = small_grid(2.0, 86.0);
  BraggKleeman bk(2.147e-3, 1.777);
  double sigma = 0.4;
  DirectionalField f = sweep_direction(grid, bk, EnergyFunction(sigma), {1.0, 0.0}, 0,
                                       left_face_const(2.5), {}, {});
  for (int k = 0; k < grid.nx(); ++k) {
    double e = grid.e(1);
    auto t = trace_characteristic(grid, bk, {1.0, 0.0}, {grid.x(k), grid.y(1)}, e);
    if (t.face == EntryFace::EnergyTop) continue;
    double expect = 2.5 * bk.stopping(t.e0) / bk.stopping(e) * std::exp(-sigma * t.tau);
    CHECK(f.at(k, 1, 1) == doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("constant source with flat stopping matches the closed form") {
  PhaseGrid grid = small_grid(10.0, 100.0);
  BraggKleeman bk(1.0, 1.0);
  double sigma = 0.5, c = 2.0;
  VolumetricSource source;
  source.analytic = [c](Vec2, double, int) { return c; };

  SweepParams coarse{0.5};
  DirectionalField f = sweep_direction(grid, bk, EnergyFunction(sigma), {1.0, 0.0}, 0,
                                       zero_inflow(), source, coarse);
  const double closed = 2.110533789036;  // (c/sigma)(1 - exp(-sigma tau)), tau = 1.5
  CHECK(f.at(3, 2, 1) == doctest::Approx(closed).epsilon(5e-3));
  CHECK(f.at(3, 2, 2) == doctest::Approx(closed).epsilon(5e-3));

  SweepParams fine{0.05};
  DirectionalField g = sweep_direction(grid, bk, EnergyFunction(sigma), {1.0, 0.0}, 0,
                                       zero_inflow(), source, fine);
  CHECK(g.at(3, 2, 1) == doctest::Approx(closed).epsilon(5e-5));
}

TEST_CASE("non-finite source samples are rejected") {
  PhaseGrid grid = small_grid();
  BraggKleeman bk(2.147e-3, 1.777);
  VolumetricSource source;
  source.analytic = [](Vec2 pos, double, int) {
    return pos.x > 2.0 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
  };
  CHECK_THROWS_WITH_AS(sweep_direction(grid, bk, EnergyFunction(0.0), {1.0, 0.0}, 0,
                                       zero_inflow(), source, {}),
                       doctest::Contains("non-finite source"), Error);
}

TEST_CASE("non-finite inflow is rejected") {
  PhaseGrid grid = small_grid();
  BraggKleeman bk(2.147e-3, 1.777);
  InflowData g;
  g.spatial = [](EntryFace, Vec2, double, int) {
    return std::numeric_limits<double>::quiet_NaN();
  };
  g.top = [](Vec2, int) { return 0.0; };
  CHECK_THROWS_WITH_AS(
      sweep_direction(grid, bk, EnergyFunction(0.0), {1.0, 0.0}, 0, g, {}, {}),
      doctest::Contains("non-finite inflow"), Error);
}

TEST_CASE("non-negative data yields a non-negative field") {
  PhaseGrid grid = small_grid(2.0, 86.0, 7, 7, 5);
  BraggKleeman bk(2.147e-3, 1.777);
  std::mt19937 rng{4321};
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  AngularField src_field(grid, 1);
  for (auto& v : src_field.dir(0).data()) v = unif(rng);
  VolumetricSource source;
  source.per_dir = &src_field;

  InflowData g;
  g.spatial = [](EntryFace, Vec2 pos, double e, int) {
    return 0.3 + 0.1 * std::sin(pos.y + 0.01 * e);
  };
  g.top = [](Vec2, int) { return 0.05; };

  double c = std::sqrt(0.5);
  DirectionalField f =
      sweep_direction(grid, bk, EnergyFunction(0.3), {c, c}, 0, g, source, {});
  for (double v : f.data()) CHECK(v >= 0.0);
}

TEST_CASE("the sweep is linear in inflow and source") {
  PhaseGrid grid = small_grid(2.0, 86.0, 7, 5, 5);
  BraggKleeman bk(2.147e-3, 1.777);
  EnergyFunction sigma(0.25);
  double cdir = std::cos(0.3), sdir = std::sin(0.3);
  Vec2 omega{cdir, sdir};

  InflowData g1 = left_face_const(1.0);
  InflowData g2;
  g2.spatial = [](EntryFace, Vec2 pos, double e, int) { return 0.2 * pos.y + 0.001 * e; };
  g2.top = [](Vec2 pos, int) { return 0.1 * pos.x; };

  VolumetricSource s1;
  s1.analytic = [](Vec2 pos, double, int) { return 0.5 + 0.1 * pos.x; };
  VolumetricSource s2;
  s2.analytic = [](Vec2 pos, double e, int) { return 0.3 * pos.y + 0.002 * e; };

  const double a = 1.7, b = -0.6;
  InflowData gc;
  gc.spatial = [&](EntryFace f, Vec2 p, double e, int i) {
    return a * g1.spatial(f, p, e, i) + b * g2.spatial(f, p, e, i);
  };
  gc.top = [&](Vec2 p, int i) { return a * g1.top(p, i) + b * g2.top(p, i); };
  VolumetricSource sc;
  sc.analytic = [&](Vec2 p, double e, int i) {
    return a * s1.analytic(p, e, i) + b * s2.analytic(p, e, i);
  };

  DirectionalField f1 = sweep_direction(grid, bk, sigma, omega, 0, g1, s1, {});
  DirectionalField f2 = sweep_direction(grid, bk, sigma, omega, 0, g2, s2, {});
  DirectionalField fc = sweep_direction(grid, bk, sigma, omega, 0, gc, sc, {});

  double scale = 0.0;
  for (double v : fc.data()) scale = std::max(scale, std::fabs(v));
  for (std::size_t n = 0; n < fc.data().size(); ++n) {
    double combo = a * f1.data()[n] + b * f2.data()[n];
    CHECK(std::fabs(fc.data()[n] - combo) <= 1e-12 * scale);
  }
}

TEST_CASE("a constant gridded source matches the analytic constant source") {
  PhaseGrid grid = small_grid(2.0, 86.0, 7, 5, 5);
  BraggKleeman bk(2.147e-3, 1.777);
  AngularField src_field(grid, 1);
  for (auto& v : src_field.dir(0).data()) v = 0.8;
  VolumetricSource gridded;
  gridded.per_dir = &src_field;
  VolumetricSource analytic;
  analytic.analytic = [](Vec2, double, int) { return 0.8; };

  double c = std::cos(-0.4), s = std::sin(-0.4);
  DirectionalField f1 = sweep_direction(grid, bk, EnergyFunction(0.2), {c, s}, 0,
                                        zero_inflow(), gridded, {});
  DirectionalField f2 = sweep_direction(grid, bk, EnergyFunction(0.2), {c, s}, 0,
                                        zero_inflow(), analytic, {});
  for (std::size_t n = 0; n < f1.data().size(); ++n) {
    CHECK(f1.data()[n] == doctest::Approx(f2.data()[n]).epsilon(1e-14));
  }
}

TEST_CASE("tabulated stopping reproduces the power-law sweep") {
  PhaseGrid grid({0.0, 4.0, 0.0, 4.0, 3.0, 80.0, 6, 5, 5});
  BraggKleeman bk(2.147e-3, 1.777);
  RangeEnergyTable table;
  for (int i = 0; i < 2001; ++i) {
    double e = i == 0 ? 2.0 : i == 2000 ? 100.0 : std::exp(std::log(2.0) + (std::log(100.0) - std::log(2.0)) * i / 2000.0);
    table.energy.push_back(e);
    table.range.push_back(bk.range(e));
  }
  TabulatedStopping tab = fit_tabulated_stopping(table, 2.0, 100.0);

  DirectionalField f_bk = sweep_direction(grid, bk, EnergyFunction(0.2), {1.0, 0.0}, 0,
                                          left_face_const(1.0), {}, {});
  DirectionalField f_tab = sweep_direction(grid, tab, EnergyFunction(0.2), {1.0, 0.0}, 0,
                                           left_face_const(1.0), {}, {});
  double max_rel = 0.0;
  for (std::size_t n = 0; n < f_bk.data().size(); ++n) {
    double denom = std::max(1e-12, std::fabs(f_bk.data()[n]));
    max_rel = std::max(max_rel, std::fabs(f_bk.data()[n] - f_tab.data()[n]) / denom);
  }
  CHECK(max_rel < 1e-4);
}

TEST_CASE("step factor must be positive") {
  PhaseGrid grid = small_grid();
  BraggKleeman bk(2.147e-3, 1.777);
  SweepParams params{0.0};
  CHECK_THROWS_WITH_AS(sweep_direction(grid, bk, EnergyFunction(0.0), {1.0, 0.0}, 0,
                                       zero_inflow(), {}, params),
                       doctest::Contains("source_step_factor"), Error);
}
