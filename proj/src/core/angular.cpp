// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#include "core/angular.hpp"

#include <cmath>
#include <string>

#include "core/csvio.hpp"
#include "core/error.hpp"

namespace ionmoc {

DirectionSet build_direction_set(int q, double theta_c, Vec2 axis) {
  require(q >= 1, ErrorKind::Config, "Q must be at least 1, got " + std::to_string(q));
  require(q % 2 == 1, ErrorKind::Config, "Q must be odd, got " + std::to_string(q));
  require(theta_c > 0.0 && theta_c <= M_PI, ErrorKind::Config,
          "cone half-angle must lie in (0, pi], got " + format_double(theta_c));
  double norm = std::sqrt(dot(axis, axis));
  require(std::fabs(norm - 1.0) <= 1e-12, ErrorKind::Config,
          "beam axis must be a unit vector, |axis| = " + format_double(norm));

  DirectionSet set;
  set.q = q;
  set.theta_c = theta_c;
  set.axis = axis;
  set.theta.resize(q);
  set.weight.resize(q);
  set.omega.resize(q);
  double h = 2.0 * theta_c / q;
  for (int i = 0; i < q; ++i) {
    // (2i + 1 - Q)/Q form makes the central node exactly zero.
    double t = theta_c * (2.0 * i + 1.0 - q) / q;
    set.theta[i] = t;
    set.weight[i] = h;
    double c = std::cos(t), s = std::sin(t);
    set.omega[i] = {axis.x * c - axis.y * s, axis.x * s + axis.y * c};
  }
  return set;
}

double hg_phase(double gamma, double theta) {
  require(std::fabs(gamma) < 1.0, ErrorKind::Config,
          "anisotropy gamma must satisfy |gamma| < 1, got " + format_double(gamma));
  double g2 = gamma * gamma;
  return (1.0 - g2) / (2.0 * M_PI * (1.0 + g2 - 2.0 * gamma * std::cos(theta)));
}

namespace {

double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(double gamma, double a, double b, double fa, double fm, double fb,
                     double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = hg_phase(gamma, lm);
  double frm = hg_phase(gamma, rm);
  double left = simpson(fa, flm, fm, m - a);
  double right = simpson(fm, frm, fb, b - m);
  double err = left + right - whole;
  if (depth >= 48 || std::fabs(err) <= 15.0 * tol) {
    return left + right + err / 15.0;
  }
  return adaptive_step(gamma, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         adaptive_step(gamma, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

double bin_average_phase(double gamma, double center, double h) {
  require(h > 0.0, ErrorKind::Config, "bin width must be positive");
  double a = center - 0.5 * h;
  double b = center + 0.5 * h;
  double fa = hg_phase(gamma, a);
  double fm = hg_phase(gamma, center);
  double fb = hg_phase(gamma, b);
  double whole = simpson(fa, fm, fb, h);
  return adaptive_step(gamma, a, b, fa, fm, fb, whole, 1e-10, 0) / h;
}

TransferMatrix build_transfer_matrix(const ScatterKernel& kernel, const DirectionSet& dirs) {
  require(kernel.sigma_el >= 0.0, ErrorKind::Config,
          "sigma_el must be non-negative, got " + format_double(kernel.sigma_el));
  const int q = dirs.q;
  TransferMatrix m;
  m.q = q;
  m.sigma_el = kernel.sigma_el;
  m.sigma_t = EnergyFunction(kernel.sigma_el);
  m.coef.assign(static_cast<std::size_t>(q) * q, 0.0);

  if (kernel.kind == KernelKind::Dirac) {
    m.dirac = true;
    for (int j = 0; j < q; ++j) {
      m.coef[static_cast<std::size_t>(j) * q + j] = kernel.sigma_el / dirs.weight[j];
    }
    return m;
  }

  double gamma = kernel.kind == KernelKind::Isotropic ? 0.0 : kernel.gamma;
  if (kernel.sigma_el == 0.0) return m;

  // Node angles are equally spaced, so the bin-averaged phase only depends
  // on i - j and one pass over the offsets fills the Toeplitz matrix.
  double h = dirs.bin_width();
  std::vector<double> pbar(q);
  for (int d = 0; d < q; ++d) pbar[d] = bin_average_phase(gamma, d * h, h);
  for (int i = 0; i < q; ++i) {
    for (int j = 0; j < q; ++j) {
      m.coef[static_cast<std::size_t>(i) * q + j] = kernel.sigma_el * pbar[std::abs(i - j)];
    }
  }
  for (int j = 0; j < q; ++j) {
    double colmass = 0.0;
    for (int i = 0; i < q; ++i) {
      colmass += dirs.weight[i] * m.coef[static_cast<std::size_t>(i) * q + j];
    }
    require(colmass > 0.0, ErrorKind::Numeric,
            "zero column mass in transfer matrix at column " + std::to_string(j));
    double scale = kernel.sigma_el / colmass;
    for (int i = 0; i < q; ++i) {
      m.coef[static_cast<std::size_t>(i) * q + j] *= scale;
    }
  }
  return m;
}

void apply_gain(const TransferMatrix& m, const DirectionSet& dirs, const AngularField& psi,
                AngularField& gain) {
  const int q = m.q;
  if (m.dirac) {
    for (int i = 0; i < q; ++i) {
      const auto& src = psi.dir(i).data();
      auto& dst = gain.dir(i).data();
      for (std::size_t n = 0; n < src.size(); ++n) dst[n] = m.sigma_el * src[n];
    }
    return;
  }
  for (int i = 0; i < q; ++i) {
    auto& dst = gain.dir(i).data();
    std::fill(dst.begin(), dst.end(), 0.0);
    for (int j = 0; j < q; ++j) {
      double c = dirs.weight[j] * m.at(i, j);
      if (c == 0.0) continue;
      const auto& src = psi.dir(j).data();
      for (std::size_t n = 0; n < dst.size(); ++n) dst[n] += c * src[n];
    }
  }
}

void write_transfer_matrix_csv(const std::filesystem::path& path, const DirectionSet& dirs,
                               const TransferMatrix& m) {
  CsvWriter w(path);
  std::vector<std::string> header(dirs.theta.size());
  for (std::size_t j = 0; j < dirs.theta.size(); ++j) header[j] = format_double(dirs.theta[j]);
  w.row(header);
  for (int i = 0; i < m.q; ++i) {
    std::vector<std::string> row(m.q);
    for (int j = 0; j < m.q; ++j) row[j] = format_double(m.at(i, j));
    w.row(row);
  }
}

}  // namespace ionmoc
