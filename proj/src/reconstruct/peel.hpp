#pragma once

#include <vector>

#include "core/config.hpp"
#include "core/raster.hpp"
#include "core/record.hpp"
#include "geometry/boundary.hpp"
#include "reconstruct/annulus.hpp"
#include "wavefield/solver.hpp"

namespace recho::reconstruct {

struct PeelParams {
  PeelVariant variant = PeelVariant::vs;
  double eps = 0.0;            // 0 = variant default (min(eps0, R); VS: 2R)
  double taper_cells = 2.0;
  double mask_ramp_steps = 2.0;
  bool clamp_mask = false;
  MergeMode merge = MergeMode::last_write;
  Vec2 base_point{0.0, 0.0};
  double rho = -1.0;             // < 0: computed from the events
  double R = 0.0;                // initial radius (translation variants)
  std::vector<double> radii;     // per-source radii (VS variant)
  bool force = false;            // skip the T / monotonicity aborts
  const wavefield::SourceTrain* truth = nullptr;  // optional error logging
};

struct PeelIteration {
  int n = 0;
  double R_n = 0.0;
  double eps_n = 0.0;
  double residual_l2 = 0.0;  // relative to the initial record norm
  std::vector<double> per_source_error;
};

// Current state of a peeling run (exposed mainly for inspection/tests).
struct PeelState {
  PeelVariant variant = PeelVariant::vs;
  double R_n = 0.0;
  double eps = 0.0;
  CauchyRecord residual;
  int iteration = 0;
};

struct PeelResult {
  std::vector<Raster2D> profiles;  // per source, domain grid
  Raster2D base_profile;           // translation variants: f in the base frame
  std::vector<PeelIteration> log;
  double rho = 0.0;
};

// Peeling iterations. events = (t_j, x_j), ordered in time.
//  vs:        per source, recover the full ball (eps = 2R_j), re-simulate,
//             subtract, advance to the next source.
//  riemannian: recover f on the outer annulus of source 1, translate to every
//             A_j by parallel transport + exp, subtract, R <- R - eps.
//  euclidean: same loop with Euclidean shifts and the radius inflation
//             R^(n+1) = (c+/c-) (R^(n) - eps), terminating once R^(n) <= eps.
PeelResult peel_run(const CauchyRecord& data,
                    const std::vector<std::pair<double, Vec2>>& events,
                    const PeelParams& params, const geometry::CircleBoundary& omega,
                    const wavefield::WaveSetup& setup);

}  // namespace recho::reconstruct
