// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#include "core/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/csvio.hpp"
#include "core/error.hpp"

namespace ionmoc {

RangeEnergyTable load_range_table(const std::filesystem::path& path) {
  CsvFile file = read_csv(path);
  const std::string where = "'" + path.string() + "'";
  if (file.header != std::vector<std::string>{"Energy_MeV", "Range_cm"}) {
    throw Error::io(where + ": expected header Energy_MeV,Range_cm");
  }
  if (file.rows.empty()) {
    throw Error::io(where + ": empty range table");
  }
  RangeEnergyTable table;
  for (std::size_t i = 0; i < file.rows.size(); ++i) {
    const auto& row = file.rows[i];
    const std::string ctx = where + " row " + std::to_string(file.row_numbers[i]);
    if (row.size() != 2) {
      throw Error::io(ctx + ": expected 2 columns, got " + std::to_string(row.size()));
    }
    double e = parse_double(row[0], ctx);
    double r = parse_double(row[1], ctx);
    if (!(e > 0.0)) throw Error::io(ctx + ": non-positive energy");
    if (!(r > 0.0)) throw Error::io(ctx + ": non-positive range");
    if (!table.energy.empty()) {
      if (e <= table.energy.back()) throw Error::io(ctx + ": non-monotone energy");
      if (r <= table.range.back()) throw Error::io(ctx + ": non-monotone range");
    }
    table.energy.push_back(e);
    table.range.push_back(r);
  }
  return table;
}

BraggKleeman::BraggKleeman(double alpha, double p) : alpha_(alpha), p_(p) {
  require(alpha > 0.0, ErrorKind::Config,
          "alpha must be positive, got " + format_double(alpha));
  require(p >= 1.0 && p <= 2.0, ErrorKind::Config,
          "exponent p must lie in [1, 2], got " + format_double(p));
}

double BraggKleeman::stopping(double e) const {
  require(e > 0.0, ErrorKind::Numeric,
          "stopping power needs E > 0, got " + format_double(e));
  return std::pow(e, 1.0 - p_) / (alpha_ * p_);
}

double BraggKleeman::stopping_deriv(double e) const {
  require(e > 0.0, ErrorKind::Numeric,
          "stopping power needs E > 0, got " + format_double(e));
  return (1.0 - p_) * std::pow(e, -p_) / (alpha_ * p_);
}

double BraggKleeman::inverse_range(double r) const {
  require(r >= 0.0, ErrorKind::Numeric,
          "range must be non-negative, got " + format_double(r));
  return std::pow(r / alpha_, 1.0 / p_);
}

static void check_window(const RangeEnergyTable& table, double e_lo, double e_hi) {
  require(e_lo > 0.0 && e_hi > e_lo, ErrorKind::Config,
          "fit window must satisfy 0 < e_lo < e_hi, got [" + format_double(e_lo) +
              ", " + format_double(e_hi) + "]");
  require(table.energy.front() <= e_lo && e_hi <= table.energy.back(),
          ErrorKind::Config,
          "fit window [" + format_double(e_lo) + ", " + format_double(e_hi) +
              "] not covered by table range [" + format_double(table.energy.front()) +
              ", " + format_double(table.energy.back()) + "]");
}

BraggKleeman fit_bragg_kleeman(const RangeEnergyTable& table, double e_lo, double e_hi) {
  check_window(table, e_lo, e_hi);
  // Least squares on ln R = ln alpha + p ln E.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < table.energy.size(); ++i) {
    double e = table.energy[i];
    if (e < e_lo || e > e_hi) continue;
    double lx = std::log(e);
    double ly = std::log(table.range[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  require(n >= 3, ErrorKind::Config,
          "power-law fit needs at least 3 table rows in the window, got " +
              std::to_string(n));
  double det = n * sxx - sx * sx;
  double p = (n * sxy - sx * sy) / det;
  double ln_alpha = (sy - p * sx) / n;
  return BraggKleeman(std::exp(ln_alpha), p);
}

namespace {

// 5-point Gauss-Legendre on [a, b].
double gauss5(double a, double b, const Pchip& s_map) {
  static const double node[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                 0.5384693101056831, 0.9061798459386640};
  static const double weight[5] = {0.2369268850561891, 0.4786286704993665,
                                   0.5688888888888889, 0.4786286704993665,
                                   0.2369268850561891};
  double mid = 0.5 * (a + b);
  double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 5; ++i) {
    sum += weight[i] / s_map.eval(mid + half * node[i]);
  }
  return half * sum;
}

double invert_monotone(const std::vector<double>& xs, const std::vector<double>& ys,
                       double target, auto&& f, auto&& fprime) {
  double r = std::clamp(target, ys.front(), ys.back());
  auto it = std::upper_bound(ys.begin(), ys.end(), r);
  std::size_t i = it == ys.begin() ? 0 : static_cast<std::size_t>(it - ys.begin()) - 1;
  if (i + 1 >= xs.size()) i = xs.size() - 2;
  double lo = xs[i], hi = xs[i + 1];
  double e = lo + (hi - lo) * (r - ys[i]) / (ys[i + 1] - ys[i]);
  for (int iter = 0; iter < 60; ++iter) {
    double resid = f(e) - r;
    if (resid > 0.0) hi = e; else lo = e;
    double e_next = e - resid / fprime(e);
    if (!(e_next > lo && e_next < hi)) e_next = 0.5 * (lo + hi);
    if (std::fabs(e_next - e) <= 1e-15 * std::fabs(e_next) + 1e-300) {
      return e_next;
    }
    e = e_next;
  }
  return e;
}

}  // namespace

double TabulatedStopping::stopping(double e) const {
  if (projected_) return s_map_.eval(e);
  return 1.0 / range_map_.deriv(e);
}

double TabulatedStopping::stopping_deriv(double e) const {
  if (projected_) return s_map_.deriv(e);
  double slope = range_map_.deriv(e);
  return -range_map_.deriv2(e) / (slope * slope);
}

double TabulatedStopping::projected_range(double e) const {
  const auto& xs = s_map_.xs();
  if (e <= xs.front()) return r_prefix_.front() + (e - xs.front()) / s_map_.eval(e);
  if (e >= xs.back()) return r_prefix_.back() + (e - xs.back()) / s_map_.eval(e);
  auto it = std::upper_bound(xs.begin(), xs.end(), e);
  std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
  return r_prefix_[i] + gauss5(xs[i], e, s_map_);
}

double TabulatedStopping::range(double e) const {
  if (projected_) return projected_range(e);
  return range_map_.eval(e);
}

double TabulatedStopping::inverse_range(double r) const {
  if (projected_) {
    return invert_monotone(
        s_map_.xs(), r_prefix_, r, [this](double e) { return projected_range(e); },
        [this](double e) { return 1.0 / s_map_.eval(e); });
  }
  return invert_monotone(
      range_map_.xs(), range_map_.ys(), r, [this](double e) { return range_map_.eval(e); },
      [this](double e) { return range_map_.deriv(e); });
}

TabulatedStopping fit_tabulated_stopping(const RangeEnergyTable& table, double e_lo,
                                         double e_hi) {
  check_window(table, e_lo, e_hi);
  Pchip raw(table.energy, table.range);

  // Dense energy ladder over the window: each covered table interval split
  // into eight, window endpoints included exactly.
  std::vector<double> dense;
  dense.push_back(e_lo);
  for (std::size_t i = 0; i + 1 < table.energy.size(); ++i) {
    double a = std::max(table.energy[i], e_lo);
    double b = std::min(table.energy[i + 1], e_hi);
    if (b <= a) continue;
    for (int j = 1; j <= 8; ++j) {
      double e = a + (b - a) * j / 8.0;
      if (e > dense.back() * (1.0 + 1e-14)) dense.push_back(e);
    }
  }
  if (dense.back() < e_hi) dense.push_back(e_hi);

  double slope_scale = (raw.eval(e_hi) - raw.eval(e_lo)) / (e_hi - e_lo);
  std::vector<double> s(dense.size());
  for (std::size_t j = 0; j < dense.size(); ++j) {
    double slope = std::max(raw.deriv(dense[j]), 1e-8 * slope_scale);
    s[j] = 1.0 / slope;
  }

  bool monotone = true;
  for (std::size_t j = 0; j + 1 < s.size(); ++j) {
    if (s[j + 1] > s[j] * (1.0 + 1e-12)) {
      monotone = false;
      break;
    }
  }

  TabulatedStopping model;
  model.e_lo_ = e_lo;
  model.e_hi_ = e_hi;
  if (monotone) {
    model.range_map_ = std::move(raw);
    model.projected_ = false;
    return model;
  }

  // Projection: running minimum from the low-energy end enforces a
  // non-increasing profile and a three-point average smooths the kinks. The
  // smoothed S is interpolated directly, so the interpolant inherits
  // monotonicity, and the range map becomes the cumulative integral of 1/S.
  for (std::size_t j = 1; j < s.size(); ++j) s[j] = std::min(s[j], s[j - 1]);
  std::vector<double> smooth(s);
  for (std::size_t j = 1; j + 1 < s.size(); ++j) {
    smooth[j] = (s[j - 1] + s[j] + s[j + 1]) / 3.0;
  }
  for (std::size_t j = 1; j < smooth.size(); ++j) {
    smooth[j] = std::min(smooth[j], smooth[j - 1]);
  }
  model.s_map_ = Pchip(std::move(dense), std::move(smooth));
  const auto& xs = model.s_map_.xs();
  model.r_prefix_.resize(xs.size());
  model.r_prefix_[0] = raw.eval(e_lo);
  for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
    model.r_prefix_[j + 1] = model.r_prefix_[j] + gauss5(xs[j], xs[j + 1], model.s_map_);
  }
  model.projected_ = true;
  return model;
}

void write_stopping_table_csv(const std::filesystem::path& path,
                              const RangeEnergyTable& table, const StoppingModel& model,
                              double e_lo, double e_hi) {
  CsvWriter w(path);
  w.raw_line("E_MeV,S_MeV_per_cm,R_cm");
  for (double e : table.energy) {
    if (e < e_lo || e > e_hi) continue;
    w.cells(e, model.stopping(e), model.range(e));
  }
}

}  // namespace ionmoc
