#pragma once

#include "core/raster.hpp"
#include "core/record.hpp"
#include "geometry/boundary.hpp"
#include "geometry/fast_marching.hpp"
#include "wavefield/solver.hpp"

namespace recho::reconstruct {

struct AnnulusOptions {
  double taper_cells = 2.0;      // cosine taper width at both radii
  double mask_ramp_steps = 2.0;  // cone-edge smoothing, in time steps
  bool clamp_mask = false;
};

// Annulus readout window around `center`: 1 on [R-eps+w, R-w] in travel-time
// radius, cosine ramps inside both edges, 0 outside [R-eps, R]. For eps >= R
// the inner edge disappears (full ball).
Raster2D annulus_window(const geometry::DistanceField& from_center, double R, double eps,
                        double taper_width);

// Recovery of the source profile on the annulus B_R(center) \ B_{R-eps}:
// shifts the record to t_src, odd-extends, applies the truncated-cone mask
// h(y) = d(y, B_R(center)) + eps, runs masked time reversal and reads the
// time derivative at the source time, windowed to the annulus.
Raster2D recover_annulus(const CauchyRecord& data, const Vec2& center, double R, double eps,
                         double t_src, const geometry::CircleBoundary& omega,
                         const wavefield::WaveSetup& setup, const AnnulusOptions& opt = {});

// data - solve_forward(train): exact samplewise subtraction on the shared
// channel/time grid.
CauchyRecord subtract_forward(const CauchyRecord& data, const wavefield::SourceTrain& train,
                              const wavefield::WaveSetup& setup);

}  // namespace recho::reconstruct
