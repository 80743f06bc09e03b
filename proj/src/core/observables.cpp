// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#include "core/observables.hpp"

#include <cmath>
#include <cstdlib>

#include "core/csvio.hpp"
#include "core/error.hpp"

namespace ionmoc {

DoseField compute_dose(const PhaseGrid& grid, const DirectionSet& dirs,
                       const AngularField& psi, const EnergyFunction& kappa) {
  require(psi.q() == dirs.q, ErrorKind::Numeric, "dose: field and direction set disagree on Q");
  const int nx = grid.nx(), ny = grid.ny(), ne = grid.ne();

  std::vector<double> kw(ne);
  for (int m = 0; m < ne; ++m) kw[m] = grid.we(m) * kappa(grid.e(m));

  DoseField dose(nx, ny);
  for (int k = 0; k < nx; ++k) {
    for (int l = 0; l < ny; ++l) {
      double acc = 0.0;
      for (int i = 0; i < dirs.q; ++i) {
        const DirectionalField& f = psi.dir(i);
        double dir_acc = 0.0;
        for (int m = 0; m < ne; ++m) dir_acc += kw[m] * f.at(k, l, m);
        acc += dirs.weight[i] * dir_acc;
      }
      dose.at(k, l) = acc;
    }
  }
  return dose;
}

DoseField compute_dose(const PhaseGrid& grid, const DirectionSet& dirs,
                       const AngularField& psi, const StoppingModel& stopping) {
  return compute_dose(grid, dirs, psi,
                      EnergyFunction([&stopping](double e) { return stopping.stopping(e); }));
}

double relative_linf_error(const DoseField& d, const DoseField& ref) {
  require(d.nx() == ref.nx() && d.ny() == ref.ny(), ErrorKind::Numeric,
          "relative_linf_error: shape mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t n = 0; n < d.data().size(); ++n) {
    num = std::max(num, std::abs(d.data()[n] - ref.data()[n]));
    den = std::max(den, std::abs(ref.data()[n]));
  }
  require(den > 0.0, ErrorKind::Numeric, "relative_linf_error: reference dose is identically zero");
  return num / den;
}

std::vector<std::pair<double, double>> depth_dose(const PhaseGrid& grid,
                                                  const DoseField& dose, double band) {
  if (band <= 0.0) band = grid.dy();
  const double y_mid = 0.5 * (grid.y(0) + grid.y(grid.ny() - 1));
  const double slack = 1e-12 * (grid.y(grid.ny() - 1) - grid.y(0));

  std::vector<int> rows;
  for (int l = 0; l < grid.ny(); ++l) {
    if (std::abs(grid.y(l) - y_mid) <= band + slack) rows.push_back(l);
  }
  require(!rows.empty(), ErrorKind::Numeric, "depth_dose: band contains no grid rows");

  std::vector<std::pair<double, double>> out;
  out.reserve(grid.nx());
  for (int k = 0; k < grid.nx(); ++k) {
    double acc = 0.0;
    for (int l : rows) acc += dose.at(k, l);
    out.emplace_back(grid.x(k), acc / static_cast<double>(rows.size()));
  }
  return out;
}

BeamWidth beam_width(const PhaseGrid& grid, const DoseField& dose, double x_probe) {
  int k_best = 0;
  double best = std::abs(grid.x(0) - x_probe);
  for (int k = 1; k < grid.nx(); ++k) {
    const double dist = std::abs(grid.x(k) - x_probe);
    if (dist < best) {
      best = dist;
      k_best = k;
    }
  }

  double mass = 0.0, first = 0.0;
  for (int l = 0; l < grid.ny(); ++l) {
    const double w = grid.wy(l) * dose.at(k_best, l);
    mass += w;
    first += w * grid.y(l);
  }
  require(mass > 0.0, ErrorKind::Numeric, "beam width: zero dose mass at the probe depth");
  const double center = first / mass;

  double second = 0.0;
  for (int l = 0; l < grid.ny(); ++l) {
    const double dy = grid.y(l) - center;
    second += grid.wy(l) * dose.at(k_best, l) * dy * dy;
  }
  return BeamWidth{center, 2.0 * std::sqrt(std::max(0.0, second / mass))};
}

void write_dose_csv(const std::filesystem::path& path, const PhaseGrid& grid,
                    const DoseField& dose) {
  CsvWriter out(path);
  out.raw_line("x_cm,y_cm,dose");
  for (int k = 0; k < grid.nx(); ++k) {
    for (int l = 0; l < grid.ny(); ++l) {
      out.cells(grid.x(k), grid.y(l), dose.at(k, l));
    }
  }
}

DoseField read_dose_csv(const std::filesystem::path& path, const PhaseGrid& grid) {
  const CsvFile csv = read_csv(path);
  require(csv.header == std::vector<std::string>{"x_cm", "y_cm", "dose"}, ErrorKind::Io,
          path.string() + ": unexpected dose header");
  const std::size_t expected = static_cast<std::size_t>(grid.nx()) * grid.ny();
  require(csv.rows.size() == expected, ErrorKind::Io,
          path.string() + ": dose row count does not match the grid");

  DoseField dose(grid.nx(), grid.ny());
  std::size_t n = 0;
  for (int k = 0; k < grid.nx(); ++k) {
    for (int l = 0; l < grid.ny(); ++l, ++n) {
      const auto& row = csv.rows[n];
      require(row.size() == 3, ErrorKind::Io, path.string() + ": expected 3 columns");
      dose.at(k, l) = parse_double(row[2], path.string());
    }
  }
  return dose;
}

void write_depth_dose_csv(const std::filesystem::path& path, const std::vector<double>& x,
                          const std::vector<double>& d_c, const std::vector<double>& d_p,
                          const std::vector<double>& d_n) {
  require(d_c.size() == x.size() && d_p.size() == x.size() && d_n.size() == x.size(),
          ErrorKind::Numeric, "depth dose components disagree on length");
  CsvWriter out(path);
  out.raw_line("x_cm,D_C,D_P,D_N,D_T");
  for (std::size_t n = 0; n < x.size(); ++n) {
    out.cells(x[n], d_c[n], d_p[n], d_n[n], d_c[n] + d_p[n] + d_n[n]);
  }
}

}  // namespace ionmoc
