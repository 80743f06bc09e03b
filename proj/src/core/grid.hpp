// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

namespace ionmoc {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

// Tensor-product node grid over [x_min,x_max] x [y_min,y_max] x [E_min,E_max].
// Nodes include both endpoints on every axis, so spacing is extent/(n-1).
struct GridSpec {
  double x_min = 0.0, x_max = 0.0;
  double y_min = 0.0, y_max = 0.0;
  double e_min = 0.0, e_max = 0.0;
  int nx = 0, ny = 0, ne = 0;
};

class PhaseGrid {
 public:
  explicit PhaseGrid(const GridSpec& spec);

  int nx() const { return spec_.nx; }
  int ny() const { return spec_.ny; }
  int ne() const { return spec_.ne; }
  std::size_t num_nodes() const {
    return static_cast<std::size_t>(spec_.nx) * spec_.ny * spec_.ne;
  }

  double x_min() const { return spec_.x_min; }
  double x_max() const { return spec_.x_max; }
  double y_min() const { return spec_.y_min; }
  double y_max() const { return spec_.y_max; }
  double e_min() const { return spec_.e_min; }
  double e_max() const { return spec_.e_max; }

  double dx() const { return dx_; }
  double dy() const { return dy_; }
  double de() const { return de_; }

  double x(int k) const { return axis_node(spec_.x_min, spec_.x_max, spec_.nx, k); }
  double y(int l) const { return axis_node(spec_.y_min, spec_.y_max, spec_.ny, l); }
  double e(int m) const { return axis_node(spec_.e_min, spec_.e_max, spec_.ne, m); }

  // Linear index with the energy axis fastest, matching the CSV row order
  // (x outer, then y, then E).
  std::size_t index(int k, int l, int m) const {
    return (static_cast<std::size_t>(k) * spec_.ny + l) * spec_.ne + m;
  }

  // Cell index and barycentric coordinate along one axis, clamped to the
  // grid so that querying a hair outside the extent extrapolates constantly.
  void locate_x(double v, int& k, double& t) const { locate(spec_.x_min, dx_, spec_.nx, v, k, t); }
  void locate_y(double v, int& l, double& t) const { locate(spec_.y_min, dy_, spec_.ny, v, l, t); }
  void locate_e(double v, int& m, double& t) const { locate(spec_.e_min, de_, spec_.ne, v, m, t); }

  // Trapezoid quadrature weight of a node along each axis.
  double wx(int k) const { return (k == 0 || k == spec_.nx - 1) ? 0.5 * dx_ : dx_; }
  double wy(int l) const { return (l == 0 || l == spec_.ny - 1) ? 0.5 * dy_ : dy_; }
  double we(int m) const { return (m == 0 || m == spec_.ne - 1) ? 0.5 * de_ : de_; }

  const GridSpec& spec() const { return spec_; }

 private:
  static double axis_node(double lo, double hi, int n, int i) {
    return ((n - 1 - i) * lo + i * hi) / (n - 1);
  }
  static void locate(double lo, double d, int n, double v, int& i, double& t);

  GridSpec spec_;
  double dx_, dy_, de_;
};

enum class FaceRole { Inflow, Outflow };

// Roles of the four spatial faces for a given transport direction. The
// energy axis needs no direction: particles only lose energy, so E_max is
// always the energy inflow face and E_min the outflow face.
struct BoundaryRoles {
  FaceRole left, right, bottom, top;
};

// Requires a unit vector (within 1e-12). A face with omega . n < 0 for
// outward normal n receives particles; grazing incidence counts as outflow.
BoundaryRoles classify_boundary(Vec2 omega);

// Scalar field on the phase grid for one transport direction.
class DirectionalField {
 public:
  DirectionalField() = default;
  explicit DirectionalField(const PhaseGrid& grid)
      : nx_(grid.nx()), ny_(grid.ny()), ne_(grid.ne()),
        data_(grid.num_nodes(), 0.0) {}

  double& at(int k, int l, int m) { return data_[idx(k, l, m)]; }
  double at(int k, int l, int m) const { return data_[idx(k, l, m)]; }

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int ne() const { return ne_; }
  std::size_t size() const { return data_.size(); }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t idx(int k, int l, int m) const {
    return (static_cast<std::size_t>(k) * ny_ + l) * ne_ + m;
  }
  int nx_ = 0, ny_ = 0, ne_ = 0;
  std::vector<double> data_;
};

// One DirectionalField per angular node.
class AngularField {
 public:
  AngularField() = default;
  AngularField(const PhaseGrid& grid, int q)
      : fields_(static_cast<std::size_t>(q), DirectionalField(grid)) {}

  int q() const { return static_cast<int>(fields_.size()); }
  DirectionalField& dir(int i) { return fields_[static_cast<std::size_t>(i)]; }
  const DirectionalField& dir(int i) const { return fields_[static_cast<std::size_t>(i)]; }

 private:
  std::vector<DirectionalField> fields_;
};

// Max-norm of the difference over all nodes and directions.
double max_abs_diff(const AngularField& a, const AngularField& b);
double max_abs(const AngularField& a);

// Writes "x_cm,y_cm,E_MeV,value" rows, x outer, then y, then E.
void write_field_csv(const std::filesystem::path& path, const PhaseGrid& grid,
                     const DirectionalField& field);
DirectionalField read_field_csv(const std::filesystem::path& path, const PhaseGrid& grid);

}  // namespace ionmoc
