#include "reconstruct/annulus.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "reconstruct/mask.hpp"

namespace recho::reconstruct {

using geometry::CircleBoundary;
using geometry::DistanceField;
using wavefield::SourceTrain;
using wavefield::WaveSetup;

namespace {

inline double taper01(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return 0.5 - 0.5 * std::cos(M_PI * u);
}

TimeSeriesRecord shift_to(const TimeSeriesRecord& rec, int k_src) {
  TimeSeriesRecord out;
  out.dt = rec.dt;
  out.t_start = 0.0;
  out.channels = rec.channels;
  const int n = rec.n_steps() - k_src;
  const int nc = rec.n_channels();
  out.samples.assign(static_cast<size_t>(n) * nc, 0.0);
  for (int k = 0; k < n; ++k)
    for (int c = 0; c < nc; ++c) out.at(k, c) = rec.at(k + k_src, c);
  return out;
}

}  // namespace

Raster2D annulus_window(const DistanceField& from_center, double R, double eps,
                        double taper_width) {
  const Raster2D& dist = from_center.raster();
  Raster2D w(dist.geom());
  const double w_t = std::max(taper_width, 1e-12);
  const double inner = R - eps;
  for (size_t i = 0; i < w.values.size(); ++i) {
    const double r = dist.values[i];
    double f = taper01((R - r) / w_t);
    if (inner > 0.0) f *= taper01((r - inner) / w_t);
    w.values[i] = f;
  }
  return w;
}

Raster2D recover_annulus(const CauchyRecord& data, const Vec2& center, double R, double eps,
                         double t_src, const CircleBoundary& omega, const WaveSetup& setup,
                         const AnnulusOptions& opt) {
  const double dt = setup.dt();
  if (std::abs(data.dirichlet.dt - dt) > 1e-9 * dt)
    throw SolverError("record dt does not match solver dt");
  const int k_src = static_cast<int>(std::lround(t_src / dt));
  if (k_src < 0 || k_src >= data.dirichlet.n_steps() - 2)
    throw SolverError("source time lies outside the record");

  // Shift so the targeted event sits at t = 0, then extend oddly.
  CauchyRecord shifted{shift_to(data.dirichlet, k_src), shift_to(data.neumann, k_src)};
  const CauchyRecord ext = odd_extend(shifted);
  const double span = -ext.dirichlet.t_start;

  const ConeMask mask = build_mask(center, R, eps, ext.dirichlet.channels, *setup.speed,
                                   span, opt.clamp_mask);

  const auto tr = wavefield::solve_time_reversal(ext, mask, 0.0, omega, setup,
                                                 opt.mask_ramp_steps * dt);

  const DistanceField dist(center, *setup.speed, setup.grid);
  const double taper_w = opt.taper_cells * std::max(setup.grid.dx, setup.grid.dy);
  const Raster2D window = annulus_window(dist, R, eps, taper_w);

  Raster2D out = tr.ut;
  for (size_t i = 0; i < out.values.size(); ++i) out.values[i] *= window.values[i];
  return out;
}

CauchyRecord subtract_forward(const CauchyRecord& data, const SourceTrain& train,
                              const WaveSetup& setup) {
  const double T = data.dirichlet.t_end();
  const auto fwd =
      wavefield::solve_forward(train, T + 0.5 * data.dirichlet.dt, setup,
                               data.dirichlet.channels);
  if (fwd.record.dirichlet.n_steps() != data.dirichlet.n_steps() ||
      fwd.record.dirichlet.n_channels() != data.dirichlet.n_channels())
    throw SolverError("subtract_forward: record grids do not match");

  CauchyRecord out = data;
  for (size_t i = 0; i < out.dirichlet.samples.size(); ++i) {
    out.dirichlet.samples[i] -= fwd.record.dirichlet.samples[i];
    out.neumann.samples[i] -= fwd.record.neumann.samples[i];
  }
  return out;
}

}  // namespace recho::reconstruct
