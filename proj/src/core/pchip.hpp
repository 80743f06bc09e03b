// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace ionmoc {

// Shape-preserving piecewise-cubic Hermite interpolant with Fritsch-Carlson
// node slopes. Monotone data yields a monotone interpolant. Evaluation
// outside the node range extends linearly with the endpoint slope.
class Pchip {
 public:
  Pchip() = default;
  Pchip(std::vector<double> x, std::vector<double> y);

  double eval(double v) const;
  double deriv(double v) const;
  double deriv2(double v) const;

  const std::vector<double>& xs() const { return x_; }
  const std::vector<double>& ys() const { return y_; }
  const std::vector<double>& slopes() const { return d_; }

 private:
  int segment(double v) const;

  std::vector<double> x_, y_, d_;
};

}  // namespace ionmoc
