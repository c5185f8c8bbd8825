#pragma once

#include <vector>

#include "core/config.hpp"
#include "core/raster.hpp"
#include "geometry/fast_marching.hpp"
#include "geometry/speed_field.hpp"

namespace recho::wavefield {

// One discrete-in-time source: fires at time t with the sampled spatial
// profile (support = nonzero cells).
struct SourceEvent {
  double t = 0.0;
  Vec2 center;
  Raster2D profile;
  SupportKind kind = SupportKind::ball;
  double radius = 0.0;  // enclosing geodesic radius (balls: the ball radius)
};

using SourceTrain = std::vector<SourceEvent>;

// Mollified indicator of a ball around `center`: amplitude inside, C2 ramp to
// zero over `edge_width` at the rim. Geodesic metric balls go through a
// fast-marching distance solve; euclidean balls use |x - center|.
Raster2D ball_profile(const Vec2& center, double radius, double amplitude,
                      double edge_width, SupportMetric metric,
                      const geometry::SpeedField& speed, const GridGeom& grid);

// Thin band of the given full width around a polyline, cross-section smoothed,
// amplitude normalized so the band integrates to amplitude * curve length.
Raster2D band_profile(const std::vector<Vec2>& polyline, double width, double amplitude,
                      const GridGeom& grid);

// Builds the train described by the config (profiles sampled on the domain
// grid). Validates that ball profiles vanish outside their geodesic ball.
SourceTrain build_train(const RunConfig& cfg, const geometry::SpeedField& speed);

// Max travel-time distance from `center` over the support cells of `profile`
// (the minimal enclosing geodesic radius, up to grid resolution).
double enclosing_radius(const Raster2D& profile, const Vec2& center,
                        const geometry::SpeedField& speed);

}  // namespace recho::wavefield
