#pragma once

#include "core/raster.hpp"
#include "geometry/boundary.hpp"
#include "geometry/speed_field.hpp"

namespace recho::geometry {

// First-order upwind fast-marching solve of |grad T| = 1/c from a point
// source. Nodes near the source are initialized from the local two-point
// travel time to keep the source singularity error small.
class DistanceField {
 public:
  DistanceField(const Vec2& source, const SpeedField& speed, const GridGeom& grid);
  DistanceField(const Vec2& source, const SpeedField& speed)
      : DistanceField(source, speed, speed.default_grid()) {}

  double at(const Vec2& p) const;  // bilinear read
  const Raster2D& raster() const { return times_; }
  const Vec2& source() const { return src_; }

 private:
  Vec2 src_;
  Raster2D times_;
};

// Travel-time distance between two points (one fast-marching solve).
double distance(const Vec2& a, const Vec2& b, const SpeedField& speed);
double distance(const Vec2& a, const Vec2& b, const SpeedField& speed, const GridGeom& grid);

// max(d(y, p) - r, 0): distance to the geodesic ball B_r(p); exact for simple
// geometry (radial geodesics hit the ball normally).
double dist_to_ball(const Vec2& y, const Vec2& p, double r, const SpeedField& speed);
double dist_to_ball(const DistanceField& from_center, const Vec2& y, double r);

// Max pairwise travel-time distance over a deterministic boundary sampling;
// a lower bound for the true diameter within sampling resolution.
double diameter(const CircleBoundary& omega, const SpeedField& speed, int n_samples = 128);

}  // namespace recho::geometry
