// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <filesystem>
#include <vector>

#include "core/pchip.hpp"

namespace ionmoc {

// Range-energy rows (E in MeV, or MeV/u for ions; R in cm), strictly
// increasing in both columns.
struct RangeEnergyTable {
  std::vector<double> energy;
  std::vector<double> range;
};

// Reads "Energy_MeV,Range_cm" rows. '#' lines are comments. Malformed rows,
// non-positive energies and non-monotone columns are reported with their
// data row number.
RangeEnergyTable load_range_table(const std::filesystem::path& path);

class BraggKleeman;

// Continuous-slowing-down model: stopping power S(E) = -dE/dx, its energy
// derivative, the range map R(E) and its inverse.
class StoppingModel {
 public:
  virtual ~StoppingModel() = default;

  virtual double stopping(double e) const = 0;
  virtual double stopping_deriv(double e) const = 0;
  virtual double range(double e) const = 0;
  virtual double inverse_range(double r) const = 0;

  // Non-null when the model is an exact power law, enabling the closed-form
  // sweep kernels.
  virtual const BraggKleeman* power_law() const { return nullptr; }
};

// R(E) = alpha * E^p, so S(E) = E^(1-p) / (alpha p).
class BraggKleeman final : public StoppingModel {
 public:
  BraggKleeman(double alpha, double p);

  double alpha() const { return alpha_; }
  double p() const { return p_; }

  double stopping(double e) const override;
  double stopping_deriv(double e) const override;
  double range(double e) const override { return alpha_ * std::pow(e, p_); }
  double inverse_range(double r) const override;
  const BraggKleeman* power_law() const override { return this; }

 private:
  double alpha_, p_;
};

// Stopping model backed by a monotone cubic range interpolant, S = 1/R'.
// When the raw 1/R' fails to be non-increasing it is projected (running
// minimum from the low-energy end, lightly smoothed) and re-interpolated in
// S directly; the range map then becomes the exact cumulative integral of
// 1/S, which keeps the pair consistent and S monotone everywhere.
class TabulatedStopping final : public StoppingModel {
 public:
  double stopping(double e) const override;
  double stopping_deriv(double e) const override;
  double range(double e) const override;
  double inverse_range(double r) const override;

  double e_lo() const { return e_lo_; }
  double e_hi() const { return e_hi_; }
  bool projected() const { return projected_; }

 private:
  friend TabulatedStopping fit_tabulated_stopping(const RangeEnergyTable&, double, double);

  double projected_range(double e) const;

  Pchip range_map_;
  Pchip s_map_;
  std::vector<double> r_prefix_;
  double e_lo_ = 0.0, e_hi_ = 0.0;
  bool projected_ = false;
};

// Log-log least squares of R = alpha E^p over table rows inside
// [e_lo, e_hi]; needs at least three rows in the window.
BraggKleeman fit_bragg_kleeman(const RangeEnergyTable& table, double e_lo, double e_hi);

TabulatedStopping fit_tabulated_stopping(const RangeEnergyTable& table, double e_lo,
                                         double e_hi);

// Writes "E_MeV,S_MeV_per_cm,R_cm" at the table nodes inside the window.
void write_stopping_table_csv(const std::filesystem::path& path,
                              const RangeEnergyTable& table, const StoppingModel& model,
                              double e_lo, double e_hi);

}  // namespace ionmoc
