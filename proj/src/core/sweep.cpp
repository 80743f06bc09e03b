// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#include "core/sweep.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "core/csvio.hpp"
#include "core/error.hpp"

namespace ionmoc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_unit(Vec2 omega) {
  double norm = std::sqrt(dot(omega, omega));
  require(std::fabs(norm - 1.0) <= 1e-12, ErrorKind::Config,
          "direction must be a unit vector, |omega| = " + format_double(norm));
}

// Distance to the spatial boundary along -omega and the face it lands on.
double spatial_entry(const PhaseGrid& grid, Vec2 pos, Vec2 omega, EntryFace& face) {
  double sx = kInf, sy = kInf;
  EntryFace fx = EntryFace::Left, fy = EntryFace::Bottom;
  if (omega.x > 0.0) {
    sx = (pos.x - grid.x_min()) / omega.x;
  } else if (omega.x < 0.0) {
    sx = (pos.x - grid.x_max()) / omega.x;
    fx = EntryFace::Right;
  }
  if (omega.y > 0.0) {
    sy = (pos.y - grid.y_min()) / omega.y;
  } else if (omega.y < 0.0) {
    sy = (pos.y - grid.y_max()) / omega.y;
    fy = EntryFace::Top;
  }
  double s;
  if (sx <= sy) {
    s = sx;
    face = fx;
  } else {
    s = sy;
    face = fy;
  }
  return s > 0.0 ? s : 0.0;
}

// Bilinear in (x, y), linear in E, constant beyond the extents.
double interp_field(const PhaseGrid& grid, const DirectionalField& f, double x, double y,
                    double e) {
  int k, l, m;
  double tx, ty, te;
  grid.locate_x(x, k, tx);
  grid.locate_y(y, l, ty);
  grid.locate_e(e, m, te);
  double c00 = f.at(k, l, m) + te * (f.at(k, l, m + 1) - f.at(k, l, m));
  double c10 = f.at(k + 1, l, m) + te * (f.at(k + 1, l, m + 1) - f.at(k + 1, l, m));
  double c01 = f.at(k, l + 1, m) + te * (f.at(k, l + 1, m + 1) - f.at(k, l + 1, m));
  double c11 = f.at(k + 1, l + 1, m) + te * (f.at(k + 1, l + 1, m + 1) - f.at(k + 1, l + 1, m));
  double c0 = c00 + ty * (c01 - c00);
  double c1 = c10 + ty * (c11 - c10);
  return c0 + tx * (c1 - c0);
}

[[noreturn]] void throw_nonfinite(const char* what, double x, double y, double e, int dir) {
  throw Error::numeric(std::string("non-finite ") + what + " at (" + format_double(x) +
                       ", " + format_double(y) + "), E = " + format_double(e) +
                       ", direction " + std::to_string(dir));
}

}  // namespace

CharacteristicTrace trace_characteristic(const PhaseGrid& grid, const StoppingModel& stopping,
                                         Vec2 omega, Vec2 pos, double e) {
  check_unit(omega);
  require(e > 0.0 && e <= grid.e_max() * (1.0 + 1e-12), ErrorKind::Numeric,
          "trace energy must lie in (0, E_max], got " + format_double(e));
  CharacteristicTrace t;
  EntryFace sp_face;
  double tau_x = spatial_entry(grid, pos, omega, sp_face);
  double r = stopping.range(e);
  double tau_e = stopping.range(grid.e_max()) - r;
  if (tau_e < 0.0) tau_e = 0.0;
  if (tau_x <= tau_e) {
    t.tau = tau_x;
    t.face = sp_face;
    t.e0 = stopping.inverse_range(r + tau_x);
    if (t.e0 > grid.e_max()) t.e0 = grid.e_max();
  } else {
    t.tau = tau_e;
    t.face = EntryFace::EnergyTop;
    t.e0 = grid.e_max();
  }
  t.entry = {pos.x - t.tau * omega.x, pos.y - t.tau * omega.y};
  return t;
}

InflowData zero_inflow() {
  InflowData g;
  g.spatial = [](EntryFace, Vec2, double, int) { return 0.0; };
  g.top = [](Vec2, int) { return 0.0; };
  return g;
}

DirectionalField sweep_direction(const PhaseGrid& grid, const StoppingModel& stopping,
                                 const EnergyFunction& sigma_t, Vec2 omega, int dir_index,
                                 const InflowData& inflow, const VolumetricSource& source,
                                 const SweepParams& params) {
  check_unit(omega);
  require(params.source_step_factor > 0.0, ErrorKind::Config,
          "moc.source_step_factor must be positive, got " +
              format_double(params.source_step_factor));

  const int nx = grid.nx(), ny = grid.ny(), ne = grid.ne();
  const double e_max = grid.e_max();
  const BraggKleeman* bk = stopping.power_law();

  std::vector<double> r_node(ne), s_node(ne);
  for (int m = 0; m < ne; ++m) {
    r_node[m] = stopping.range(grid.e(m));
    s_node[m] = stopping.stopping(grid.e(m));
  }
  const double r_max = stopping.range(e_max);

  const bool const_sigma = sigma_t.is_constant();
  const double sig = const_sigma ? sigma_t.constant_value() : 0.0;
  const bool have_source = !source.empty();
  const double h_target = params.source_step_factor * std::min(grid.dx(), grid.dy());

  double log_alpha = 0.0, inv_p = 0.0, one_minus_p = 0.0, inv_alpha_p = 0.0;
  if (bk) {
    log_alpha = std::log(bk->alpha());
    inv_p = 1.0 / bk->p();
    one_minus_p = 1.0 - bk->p();
    inv_alpha_p = 1.0 / (bk->alpha() * bk->p());
  }

  const DirectionalField* per_dir =
      source.per_dir ? &source.per_dir->dir(dir_index) : nullptr;

  auto sample_source = [&](double px, double py, double pe) {
    double v = 0.0;
    if (per_dir) v += interp_field(grid, *per_dir, px, py, pe);
    if (source.shared) v += source.shared_scale * interp_field(grid, *source.shared, px, py, pe);
    if (source.analytic) v += source.analytic({px, py}, pe, dir_index);
    if (!std::isfinite(v)) throw_nonfinite("source sample", px, py, pe, dir_index);
    return v;
  };

  DirectionalField out(grid);
  std::vector<double> sig_scratch, sg_scratch;

  for (int k = 0; k < nx; ++k) {
    const double x = grid.x(k);
    for (int l = 0; l < ny; ++l) {
      const double y = grid.y(l);
      EntryFace sp_face;
      const double tau_x = spatial_entry(grid, {x, y}, omega, sp_face);
      for (int m = 0; m < ne; ++m) {
        double tau_e = r_max - r_node[m];
        if (tau_e < 0.0) tau_e = 0.0;

        double tau, e0, s_e0;
        EntryFace face;
        if (tau_x <= tau_e) {
          tau = tau_x;
          face = sp_face;
          if (bk) {
            double log_e0 = (std::log(r_node[m] + tau) - log_alpha) * inv_p;
            e0 = std::exp(log_e0);
            s_e0 = std::exp(one_minus_p * log_e0) * inv_alpha_p;
          } else {
            e0 = stopping.inverse_range(r_node[m] + tau);
            s_e0 = stopping.stopping(e0);
          }
          if (e0 > e_max) e0 = e_max;
        } else {
          tau = tau_e;
          face = EntryFace::EnergyTop;
          e0 = e_max;
          s_e0 = s_node[ne - 1];
        }

        const Vec2 entry{x - tau * omega.x, y - tau * omega.y};
        double g0 = 0.0;
        if (face == EntryFace::EnergyTop) {
          if (inflow.top) g0 = inflow.top(entry, dir_index);
        } else if (inflow.spatial) {
          g0 = inflow.spatial(face, entry, e0, dir_index);
        }
        if (!std::isfinite(g0)) throw_nonfinite("inflow", entry.x, entry.y, e0, dir_index);

        double phi;
        const bool need_samples = tau > 0.0 && (have_source || !const_sigma);
        if (!need_samples) {
          phi = s_e0 * g0 * (sig != 0.0 ? std::exp(-sig * tau) : 1.0);
        } else {
          const int n_s = std::max(1, static_cast<int>(std::ceil(tau / h_target)));
          const double h = tau / n_s;
          double acc = 0.0;
          if (const_sigma) {
            double w = std::exp(sig * (0.5 * h - tau));
            const double ratio = std::exp(sig * h);
            for (int j = 0; j < n_s; ++j) {
              const double s_arc = (j + 0.5) * h;
              const double back = tau - s_arc;
              const double r_s = r_node[m] + back;
              double e_s, s_s;
              if (bk) {
                const double log_es = (std::log(r_s) - log_alpha) * inv_p;
                e_s = std::exp(log_es);
                s_s = std::exp(one_minus_p * log_es) * inv_alpha_p;
              } else {
                e_s = stopping.inverse_range(r_s);
                s_s = stopping.stopping(e_s);
              }
              const double g = sample_source(x - back * omega.x, y - back * omega.y, e_s);
              acc += s_s * w * g;
              w *= ratio;
            }
            phi = s_e0 * g0 * std::exp(-sig * tau) + h * acc;
          } else {
            // Midpoint attenuation needs the full path integral first, so
            // sample the cross section in one pass and combine in a second.
            sig_scratch.resize(n_s);
            sg_scratch.resize(n_s);
            for (int j = 0; j < n_s; ++j) {
              const double s_arc = (j + 0.5) * h;
              const double back = tau - s_arc;
              const double r_s = r_node[m] + back;
              double e_s, s_s;
              if (bk) {
                const double log_es = (std::log(r_s) - log_alpha) * inv_p;
                e_s = std::exp(log_es);
                s_s = std::exp(one_minus_p * log_es) * inv_alpha_p;
              } else {
                e_s = stopping.inverse_range(r_s);
                s_s = stopping.stopping(e_s);
              }
              sig_scratch[j] = sigma_t(e_s);
              sg_scratch[j] = have_source ? s_s * sample_source(x - back * omega.x,
                                                                y - back * omega.y, e_s)
                                          : 0.0;
            }
            double a_total = 0.0;
            for (int j = 0; j < n_s; ++j) a_total += sig_scratch[j];
            a_total *= h;
            if (have_source) {
              double prefix = 0.0;
              for (int j = 0; j < n_s; ++j) {
                const double a_j = h * (prefix + 0.5 * sig_scratch[j]);
                prefix += sig_scratch[j];
                acc += sg_scratch[j] * std::exp(a_j - a_total);
              }
            }
            phi = s_e0 * g0 * std::exp(-a_total) + h * acc;
          }
        }
        out.at(k, l, m) = phi / s_node[m];
      }
    }
  }
  return out;
}

}  // namespace ionmoc
