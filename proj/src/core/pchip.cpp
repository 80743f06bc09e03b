// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#include "core/pchip.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace ionmoc {

// Endpoint slope: three-point one-sided estimate, clamped so the first
// segment stays shape-preserving.
static double end_slope(double h1, double h2, double d1, double d2) {
  double d = ((2.0 * h1 + h2) * d1 - h1 * d2) / (h1 + h2);
  if (d * d1 <= 0.0) return 0.0;
  if (d1 * d2 < 0.0 && std::fabs(d) > 3.0 * std::fabs(d1)) return 3.0 * d1;
  return d;
}

Pchip::Pchip(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  require(n >= 2 && y_.size() == n, ErrorKind::Numeric,
          "interpolant needs at least two nodes");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    require(x_[i + 1] > x_[i], ErrorKind::Numeric,
            "interpolant abscissae must be strictly increasing");
  }
  d_.resize(n);
  if (n == 2) {
    double slope = (y_[1] - y_[0]) / (x_[1] - x_[0]);
    d_[0] = d_[1] = slope;
    return;
  }
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d_[i] = 0.0;
    } else {
      double w1 = 2.0 * h[i] + h[i - 1];
      double w2 = h[i] + 2.0 * h[i - 1];
      d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

int Pchip::segment(double v) const {
  int lo = 0;
  int hi = static_cast<int>(x_.size()) - 1;
  if (v <= x_[0]) return 0;
  if (v >= x_[hi]) return hi - 1;
  auto it = std::upper_bound(x_.begin(), x_.end(), v);
  return static_cast<int>(it - x_.begin()) - 1;
}

double Pchip::eval(double v) const {
  if (v < x_.front()) return y_.front() + d_.front() * (v - x_.front());
  if (v > x_.back()) return y_.back() + d_.back() * (v - x_.back());
  int i = segment(v);
  double h = x_[i + 1] - x_[i];
  double t = (v - x_[i]) / h;
  double t2 = t * t;
  double t3 = t2 * t;
  double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  double h10 = t3 - 2.0 * t2 + t;
  double h01 = -2.0 * t3 + 3.0 * t2;
  double h11 = t3 - t2;
  return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
}

double Pchip::deriv(double v) const {
  if (v < x_.front()) return d_.front();
  if (v > x_.back()) return d_.back();
  int i = segment(v);
  double h = x_[i + 1] - x_[i];
  double t = (v - x_[i]) / h;
  double t2 = t * t;
  double g00 = (6.0 * t2 - 6.0 * t) / h;
  double g10 = 3.0 * t2 - 4.0 * t + 1.0;
  double g01 = (-6.0 * t2 + 6.0 * t) / h;
  double g11 = 3.0 * t2 - 2.0 * t;
  return g00 * y_[i] + g10 * d_[i] + g01 * y_[i + 1] + g11 * d_[i + 1];
}

double Pchip::deriv2(double v) const {
  if (v < x_.front() || v > x_.back()) return 0.0;
  int i = segment(v);
  double h = x_[i + 1] - x_[i];
  double t = (v - x_[i]) / h;
  double k00 = (12.0 * t - 6.0) / (h * h);
  double k10 = (6.0 * t - 4.0) / h;
  double k01 = (-12.0 * t + 6.0) / (h * h);
  double k11 = (6.0 * t - 2.0) / h;
  return k00 * y_[i] + k10 * d_[i] + k01 * y_[i + 1] + k11 * d_[i + 1];
}

}  // namespace ionmoc
