// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#include "core/grid.hpp"

#include <cmath>
#include <string>

#include "core/csvio.hpp"
#include "core/error.hpp"

namespace ionmoc {

static void check_axis(double lo, double hi, int n, const char* name) {
  if (!(hi > lo)) {
    throw Error::config(std::string("degenerate extent on ") + name + " axis: [" +
                        format_double(lo) + ", " + format_double(hi) + "]");
  }
  if (n < 2) {
    throw Error::config(std::string(name) + " axis needs at least 2 nodes, got " +
                        std::to_string(n));
  }
}

PhaseGrid::PhaseGrid(const GridSpec& spec) : spec_(spec) {
  check_axis(spec.x_min, spec.x_max, spec.nx, "x");
  check_axis(spec.y_min, spec.y_max, spec.ny, "y");
  check_axis(spec.e_min, spec.e_max, spec.ne, "E");
  if (!(spec.e_min > 0.0)) {
    throw Error::config("E_min must be positive, got " + format_double(spec.e_min));
  }
  dx_ = (spec.x_max - spec.x_min) / (spec.nx - 1);
  dy_ = (spec.y_max - spec.y_min) / (spec.ny - 1);
  de_ = (spec.e_max - spec.e_min) / (spec.ne - 1);
}

void PhaseGrid::locate(double lo, double d, int n, double v, int& i, double& t) {
  double s = (v - lo) / d;
  if (s <= 0.0) {
    i = 0;
    t = 0.0;
    return;
  }
  if (s >= n - 1) {
    i = n - 2;
    t = 1.0;
    return;
  }
  i = static_cast<int>(s);
  if (i > n - 2) i = n - 2;
  t = s - i;
}

BoundaryRoles classify_boundary(Vec2 omega) {
  double norm = std::sqrt(dot(omega, omega));
  if (std::fabs(norm - 1.0) > 1e-12) {
    throw Error::config("direction must be a unit vector, |omega| = " + format_double(norm));
  }
  BoundaryRoles roles;
  roles.left = omega.x > 0.0 ? FaceRole::Inflow : FaceRole::Outflow;
  roles.right = omega.x < 0.0 ? FaceRole::Inflow : FaceRole::Outflow;
  roles.bottom = omega.y > 0.0 ? FaceRole::Inflow : FaceRole::Outflow;
  roles.top = omega.y < 0.0 ? FaceRole::Inflow : FaceRole::Outflow;
  return roles;
}

double max_abs_diff(const AngularField& a, const AngularField& b) {
  double m = 0.0;
  for (int i = 0; i < a.q(); ++i) {
    const auto& da = a.dir(i).data();
    const auto& db = b.dir(i).data();
    for (std::size_t n = 0; n < da.size(); ++n) {
      double d = std::fabs(da[n] - db[n]);
      if (d > m) m = d;
    }
  }
  return m;
}

double max_abs(const AngularField& a) {
  double m = 0.0;
  for (int i = 0; i < a.q(); ++i) {
    for (double v : a.dir(i).data()) {
      double d = std::fabs(v);
      if (d > m) m = d;
    }
  }
  return m;
}

void write_field_csv(const std::filesystem::path& path, const PhaseGrid& grid,
                     const DirectionalField& field) {
  CsvWriter w(path);
  w.raw_line("x_cm,y_cm,E_MeV,value");
  for (int k = 0; k < grid.nx(); ++k) {
    for (int l = 0; l < grid.ny(); ++l) {
      for (int m = 0; m < grid.ne(); ++m) {
        w.cells(grid.x(k), grid.y(l), grid.e(m), field.at(k, l, m));
      }
    }
  }
}

DirectionalField read_field_csv(const std::filesystem::path& path, const PhaseGrid& grid) {
  CsvFile file = read_csv(path);
  if (file.header != std::vector<std::string>{"x_cm", "y_cm", "E_MeV", "value"}) {
    throw Error::io("'" + path.string() + "': unexpected field CSV header");
  }
  if (file.rows.size() != grid.num_nodes()) {
    throw Error::io("'" + path.string() + "': expected " + std::to_string(grid.num_nodes()) +
                    " rows, got " + std::to_string(file.rows.size()));
  }
  DirectionalField field(grid);
  std::size_t r = 0;
  for (int k = 0; k < grid.nx(); ++k) {
    for (int l = 0; l < grid.ny(); ++l) {
      for (int m = 0; m < grid.ne(); ++m, ++r) {
        const auto& row = file.rows[r];
        if (row.size() != 4) {
          throw Error::io("'" + path.string() + "': row " +
                          std::to_string(file.row_numbers[r]) + " has " +
                          std::to_string(row.size()) + " cells, expected 4");
        }
        field.at(k, l, m) = parse_double(row[3], path.string());
      }
    }
  }
  return field;
}

}  // namespace ionmoc
