// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "core/csvio.hpp"
#include "core/error.hpp"
#include "core/multispecies.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace ionmoc;

namespace {

PhaseGrid species_grid(double e_min, double e_max, int ne, int nx = 17, int ny = 5) {
  GridSpec gs;
  gs.x_min = 0.0;
  gs.x_max = 4.0;
  gs.y_min = 0.0;
  gs.y_max = 2.0;
  gs.e_min = e_min;
  gs.e_max = e_max;
  gs.nx = nx;
  gs.ny = ny;
  gs.ne = ne;
  return PhaseGrid(gs);
}

double backward_distance(const PhaseGrid& grid, Vec2 pos, Vec2 omega) {
  double s = 1e300;
  if (omega.x > 0.0) s = std::min(s, (pos.x - grid.x(0)) / omega.x);
  if (omega.x < 0.0) s = std::min(s, (pos.x - grid.x(grid.nx() - 1)) / omega.x);
  if (omega.y > 0.0) s = std::min(s, (pos.y - grid.y(0)) / omega.y);
  if (omega.y < 0.0) s = std::min(s, (pos.y - grid.y(grid.ny() - 1)) / omega.y);
  return std::max(0.0, s);
}

SecondarySource filled_source(const PhaseGrid& grid, double value, double scale) {
  SecondarySource src;
  src.field = DirectionalField(grid);
  std::fill(src.field.data().begin(), src.field.data().end(), value);
  src.scale = scale;
  return src;
}

}  // namespace

TEST_CASE("emitted spectra integrate to one over their windows") {
  const PhaseGrid grid = species_grid(1.0, 40.0, 9);

  const EnergyFunction wp = truncated_gaussian_spectrum(20.0, 6.0, grid);
  double acc = 0.0;
  for (int m = 0; m < grid.ne(); ++m) acc += grid.we(m) * wp(grid.e(m));
  CHECK(acc == doctest::Approx(1.0).epsilon(1e-14));

  const EnergyFunction wn = uniform_spectrum(grid);
  CHECK(wn(5.0) == doctest::Approx(1.0 / 39.0).epsilon(1e-15));

  CHECK_THROWS_AS(truncated_gaussian_spectrum(20.0, -1.0, grid), Error);
}

TEST_CASE("scalar fluence is the weighted direction sum") {
  const PhaseGrid grid = species_grid(2.0, 10.0, 4, 5, 4);
  const DirectionSet dirs = build_direction_set(3, 0.9, {1.0, 0.0});

  AngularField psi(grid, dirs.q);
  for (int i = 0; i < dirs.q; ++i) {
    std::fill(psi.dir(i).data().begin(), psi.dir(i).data().end(), 1.0 + i);
  }
  const DirectionalField phi = scalar_fluence(grid, dirs, psi);

  double expected = 0.0;
  for (int i = 0; i < dirs.q; ++i) expected += dirs.weight[i] * (1.0 + i);
  CHECK(phi.at(2, 1, 3) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("interaction proxy factors a constant rate out of the integral") {
  const PhaseGrid grid = species_grid(5.0, 120.0, 7, 9, 5);

  DirectionalField phi(grid);
  for (int k = 0; k < grid.nx(); ++k) {
    for (int l = 0; l < grid.ny(); ++l) {
      for (int m = 0; m < grid.ne(); ++m) {
        phi.at(k, l, m) = std::exp(-0.2 * grid.x(k)) * (1.0 + 0.01 * grid.e(m));
      }
    }
  }

  SUBCASE("zero fluence maps to a zero proxy") {
    const DirectionalField zero(grid);
    const DoseField proxy = interaction_proxy(grid, zero, EnergyFunction(0.5));
    for (double v : proxy.data()) CHECK(v == 0.0);
  }

  SUBCASE("constant rate") {
    const double c = 0.031;
    const DoseField proxy = interaction_proxy(grid, phi, EnergyFunction(c));
    for (int k = 0; k < grid.nx(); ++k) {
      for (int l = 0; l < grid.ny(); ++l) {
        double direct = 0.0;
        for (int m = 0; m < grid.ne(); ++m) direct += grid.we(m) * phi.at(k, l, m);
        CHECK(proxy.at(k, l) == doctest::Approx(c * direct).epsilon(1e-13));
      }
    }
  }

  SUBCASE("negative rate is rejected") {
    CHECK_THROWS_AS(interaction_proxy(grid, phi, EnergyFunction(-1.0)), Error);
  }
}

TEST_CASE("secondary sources scale linearly and police their spectra") {
  const PhaseGrid grid = species_grid(1.0, 40.0, 9, 9, 5);
  DoseField proxy(grid.nx(), grid.ny());
  for (int k = 0; k < grid.nx(); ++k) {
    for (int l = 0; l < grid.ny(); ++l) proxy.at(k, l) = 1.0 + 0.1 * k + 0.05 * l;
  }
  const EnergyFunction w = truncated_gaussian_spectrum(20.0, 6.0, grid);

  SUBCASE("zero yield gives a zero scale") {
    const SecondarySource src = make_secondary_source(grid, proxy, w, 0.0, 5);
    CHECK(src.scale == 0.0);
  }

  SUBCASE("doubling the yield doubles the source") {
    const SecondarySource a = make_secondary_source(grid, proxy, w, 0.05, 5);
    const SecondarySource b = make_secondary_source(grid, proxy, w, 0.10, 5);
    CHECK(b.scale == doctest::Approx(2.0 * a.scale).epsilon(1e-15));
    CHECK(b.field.at(3, 2, 4) == a.field.at(3, 2, 4));
  }

  SUBCASE("total emission equals yield times the integrated proxy") {
    const double yield = 0.07;
    const int q = 7;
    const SecondarySource src = make_secondary_source(grid, proxy, w, yield, q);

    double emitted = 0.0;
    for (int k = 0; k < grid.nx(); ++k) {
      for (int l = 0; l < grid.ny(); ++l) {
        for (int m = 0; m < grid.ne(); ++m) {
          emitted += grid.wx(k) * grid.wy(l) * grid.we(m) * q * src.scale *
                     src.field.at(k, l, m);
        }
      }
    }
    double proxy_integral = 0.0;
    for (int k = 0; k < grid.nx(); ++k) {
      for (int l = 0; l < grid.ny(); ++l) proxy_integral += grid.wx(k) * grid.wy(l) * proxy.at(k, l);
    }
    CHECK(emitted == doctest::Approx(yield * proxy_integral).epsilon(1e-12));
  }

  SUBCASE("an unnormalized density is rejected with the measured integral") {
    CHECK_THROWS_AS(make_secondary_source(grid, proxy, EnergyFunction(1.0), 0.05, 5), Error);
  }

  SUBCASE("a negative density is rejected") {
    const EnergyFunction bad([](double e) { return e - 10.0; });
    CHECK_THROWS_AS(make_secondary_source(grid, proxy, bad, 0.05, 5), Error);
  }
}

TEST_CASE("neutron streaming matches the attenuated line-integral closed form") {
  const PhaseGrid grid = species_grid(1.0, 20.0, 5);
  const NeutronModel model{EnergyFunction(0.5), EnergyFunction(0.05)};

  SUBCASE("axis direction against the frozen constant-source value") {
    const DirectionSet dirs = build_direction_set(1, 1.5707963267948966, {1.0, 0.0});
    const SecondarySource src = filled_source(grid, 2.0, 1.0);
    const SpeciesSolution sol = solve_neutron(grid, dirs, src, model, 1);

    int k;
    double t;
    grid.locate_x(1.5, k, t);
    REQUIRE(grid.x(k) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(sol.psi.dir(0).at(k, 2, 1) == doctest::Approx(2.110533789036).epsilon(1e-10));

    for (int kk = 0; kk < grid.nx(); ++kk) {
      const double tau = grid.x(kk);
      const double expected = 2.0 * (1.0 - std::exp(-0.5 * tau)) / 0.5;
      CHECK(sol.psi.dir(0).at(kk, 1, 3) == doctest::Approx(expected).epsilon(1e-9));
    }
  }

  SUBCASE("oblique directions and the unattenuated length identity") {
    const DirectionSet dirs = build_direction_set(5, 1.0471975511965976, {1.0, 0.0});
    const NeutronModel free{EnergyFunction(0.0), EnergyFunction(0.05)};
    const SecondarySource src = filled_source(grid, 3.0, 0.5);
    const SpeciesSolution sol = solve_neutron(grid, dirs, src, free, 1);

    for (int i = 0; i < dirs.q; ++i) {
      for (int k = 0; k < grid.nx(); k += 4) {
        for (int l = 0; l < grid.ny(); l += 2) {
          const double tau = backward_distance(grid, {grid.x(k), grid.y(l)}, dirs.omega[i]);
          const double expected = 0.5 * 3.0 * tau;
          CHECK(sol.psi.dir(i).at(k, l, 2) == doctest::Approx(expected).epsilon(1e-10));
        }
      }
    }
  }

  SUBCASE("a source supported up to a node integrates to c times the length") {
    const DirectionSet dirs = build_direction_set(1, 1.5707963267948966, {1.0, 0.0});
    SecondarySource src = filled_source(grid, 0.0, 1.0);
    int k_end;
    double t;
    grid.locate_x(1.5, k_end, t);
    for (int k = 0; k <= k_end; ++k) {
      for (int l = 0; l < grid.ny(); ++l) {
        for (int m = 0; m < grid.ne(); ++m) src.field.at(k, l, m) = 4.0;
      }
    }
    const NeutronModel free{EnergyFunction(0.0), EnergyFunction(0.05)};
    const SpeciesSolution sol = solve_neutron(grid, dirs, src, free, 1);
    CHECK(sol.psi.dir(0).at(k_end, 2, 0) == doctest::Approx(4.0 * 1.5).epsilon(1e-12));
  }

  SUBCASE("negative removal or kerma is rejected") {
    const DirectionSet dirs = build_direction_set(1, 1.5707963267948966, {1.0, 0.0});
    const SecondarySource src = filled_source(grid, 1.0, 1.0);
    CHECK_THROWS_AS(
        solve_neutron(grid, dirs, src, {EnergyFunction(-0.1), EnergyFunction(0.0)}, 1), Error);
    CHECK_THROWS_AS(
        solve_neutron(grid, dirs, src, {EnergyFunction(0.1), EnergyFunction(-1.0)}, 1), Error);
  }
}

TEST_CASE("secondary protons range out at the spectrum's upper energy") {
  const PhaseGrid grid = species_grid(1.0, 40.0, 9, 33, 5);
  const DirectionSet dirs = build_direction_set(1, 1.5707963267948966, {1.0, 0.0});
  const BraggKleeman bk(2.147e-3, 1.777);

  SUBCASE("zero source gives zero dose") {
    const SecondarySource src = filled_source(grid, 0.0, 1.0);
    const SpeciesSolution sol = solve_secondary_proton(grid, dirs, src, bk, SweepParams{}, 1);
    for (double v : sol.dose.data()) CHECK(v == 0.0);
  }

  SUBCASE("a thin source column feeds dose one proton range downstream") {
    SecondarySource src = filled_source(grid, 0.0, 1.0);
    int k_src;
    double t;
    grid.locate_x(1.0, k_src, t);
    REQUIRE(grid.x(k_src) == doctest::Approx(1.0).epsilon(1e-15));
    for (int l = 0; l < grid.ny(); ++l) {
      for (int m = 0; m < grid.ne(); ++m) src.field.at(k_src, l, m) = 1.0;
    }

    const SpeciesSolution sol = solve_secondary_proton(grid, dirs, src, bk, SweepParams{}, 1);
    const auto profile = depth_dose(grid, sol.dose);

    const double reach = 1.0 + bk.range(40.0) - bk.range(1.0);
    double peak = 0.0;
    for (const auto& [x, d] : profile) peak = std::max(peak, d);
    REQUIRE(peak > 0.0);
    for (const auto& [x, d] : profile) {
      if (x > 1.1 && x < reach - 0.3) CHECK(d > 0.0);
      if (x > reach + 2.0 * grid.dx()) CHECK(d <= 1e-12 * peak);
    }
  }
}

TEST_CASE("ballistic carbon peaks at the fitted range depth") {
  const auto table = load_range_table(ionmoc_test::src_dir() / "data" / "icru_carbon_water.csv");
  const BraggKleeman fit = fit_bragg_kleeman(table, 5.0, 120.0);
  const TabulatedStopping dose_stopping = fit_tabulated_stopping(table, 5.0, 120.0);

  GridSpec gs;
  gs.x_min = 0.0;
  gs.x_max = 6.0;
  gs.y_min = 0.0;
  gs.y_max = 4.0;
  gs.e_min = 5.0;
  gs.e_max = 120.0;
  gs.nx = 49;
  gs.ny = 9;
  gs.ne = 17;
  const PhaseGrid grid(gs);
  const DirectionSet dirs = build_direction_set(1, 1.5707963267948966, {1.0, 0.0});

  BeamModel beam;
  beam.e_beam = 100.0;
  beam.sigma_e = 1.5;
  beam.y_center = 2.0;
  beam.sigma_y = 0.4;

  SUBCASE("zero inflow stays zero") {
    const SpeciesSolution sol =
        solve_carbon_primary(grid, dirs, fit, dose_stopping, {KernelKind::Dirac, 0.0, 0.0},
                             zero_inflow(), IterationConfig{}, SweepParams{}, 1);
    for (double v : sol.dose.data()) CHECK(v == 0.0);
  }

  SUBCASE("beam inflow produces the Bragg peak at the range depth") {
    const SpeciesSolution sol =
        solve_carbon_primary(grid, dirs, fit, dose_stopping, {KernelKind::Dirac, 0.0, 0.0},
                             beam_inflow(beam, dirs), IterationConfig{}, SweepParams{}, 1);

    const auto profile = depth_dose(grid, sol.dose);
    std::size_t peak = 0;
    for (std::size_t n = 1; n < profile.size(); ++n) {
      if (profile[n].second > profile[peak].second) peak = n;
    }
    const double predicted = fit.range(100.0) - fit.range(5.0);
    CHECK(std::abs(profile[peak].first - predicted) <= grid.dx() + 1e-12);
    for (const auto& [x, d] : profile) CHECK(d >= 0.0);
  }
}

TEST_CASE("the multispecies chain emits consistent artifacts") {
  MultispeciesConfig cfg;
  cfg.carbon_table = ionmoc_test::src_dir() / "data" / "icru_carbon_water.csv";
  cfg.carbon_grid.nx = 33;
  cfg.carbon_grid.ny = 9;
  cfg.carbon_grid.ne = 9;
  cfg.q = 5;
  cfg.proton_ne = 7;
  cfg.neutron_ne = 5;
  cfg.out_dir = ionmoc_test::tmp_dir() / "exp6";

  const Exp6Result result = run_experiment_6(cfg);

  CHECK(std::abs(result.carbon_peak_x - result.predicted_peak_depth) <=
        (cfg.carbon_grid.x_max - cfg.carbon_grid.x_min) / (cfg.carbon_grid.nx - 1) + 1e-12);
  REQUIRE(result.x.size() == static_cast<std::size_t>(cfg.carbon_grid.nx));

  const CsvFile depth = read_csv(cfg.out_dir / "carbon_multispecies_depth_dose.csv");
  CHECK(depth.header == std::vector<std::string>{"x_cm", "D_C", "D_P", "D_N", "D_T"});
  REQUIRE(depth.rows.size() == result.x.size());
  for (const auto& row : depth.rows) {
    const double c = parse_double(row[1], "D_C");
    const double p = parse_double(row[2], "D_P");
    const double n = parse_double(row[3], "D_N");
    const double t = parse_double(row[4], "D_T");
    CHECK(t == c + p + n);
    CHECK(c >= 0.0);
    CHECK(p >= 0.0);
    CHECK(n >= 0.0);
  }

  CHECK(std::filesystem::exists(cfg.out_dir / "carbon_dose.csv"));
  CHECK(std::filesystem::exists(cfg.out_dir / "proton_dose.csv"));
  CHECK(std::filesystem::exists(cfg.out_dir / "neutron_dose.csv"));

  const double peak_c = *std::max_element(result.d_c.begin(), result.d_c.end());
  CHECK(peak_c > 0.0);
  CHECK(*std::max_element(result.d_p.begin(), result.d_p.end()) > 0.0);
  CHECK(*std::max_element(result.d_n.begin(), result.d_n.end()) > 0.0);
}

TEST_CASE("the carbon peak moves deeper with beam energy") {
  MultispeciesConfig cfg;
  cfg.carbon_table = ionmoc_test::src_dir() / "data" / "icru_carbon_water.csv";
  cfg.carbon_grid.nx = 49;
  cfg.carbon_grid.ny = 5;
  cfg.carbon_grid.ne = 13;
  cfg.q = 1;
  cfg.kernel = {KernelKind::Dirac, 0.0, 0.0};
  cfg.beam.sigma_e = 1.5;
  cfg.proton_ne = 5;
  cfg.neutron_ne = 3;
  cfg.out_dir = ionmoc_test::tmp_dir() / "exp6_low";

  cfg.beam.e_beam = 80.0;
  const double peak_low = run_experiment_6(cfg).carbon_peak_x;

  cfg.beam.e_beam = 100.0;
  cfg.out_dir = ionmoc_test::tmp_dir() / "exp6_high";
  const double peak_high = run_experiment_6(cfg).carbon_peak_x;

  CHECK(peak_low < peak_high);
}
