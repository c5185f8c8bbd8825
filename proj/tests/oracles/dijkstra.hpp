#pragma once

#include <vector>

#include "core/raster.hpp"
#include "core/vec2.hpp"
#include "geometry/speed_field.hpp"

namespace recho::oracles {

// Shortest-path travel time on an 8-connected grid with edge weights
// (euclidean length) * 2 / (c(a) + c(b)). `refine` multiplies the base grid
// resolution (4x per the oracle definition). Independent of fast marching.
class DijkstraOracle {
 public:
  DijkstraOracle(const Vec2& source, const recho::geometry::SpeedField& speed,
                 const GridGeom& base_grid, int refine = 4);

  double at(const Vec2& p) const;  // nearest-node read

 private:
  GridGeom grid_;
  std::vector<double> dist_;
};

}  // namespace recho::oracles
