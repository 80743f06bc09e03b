// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <utility>

namespace ionmoc {

// Scalar coefficient of energy. Most runs use a constant, which the sweep
// kernels exploit; a callable covers tabulated coefficients.
class EnergyFunction {
 public:
  EnergyFunction() = default;
  EnergyFunction(double c) : c_(c) {}
  EnergyFunction(std::function<double(double)> f)
      : f_(std::move(f)), constant_(false) {}

  double operator()(double e) const { return constant_ ? c_ : f_(e); }
  bool is_constant() const { return constant_; }
  double constant_value() const { return c_; }

 private:
  std::function<double(double)> f_;
  double c_ = 0.0;
  bool constant_ = true;
};

}  // namespace ionmoc
