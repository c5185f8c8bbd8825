#pragma once

#include <string>
#include <vector>

#include "core/vec2.hpp"

namespace recho {

// Grid placement shared by rasters and solvers: node (ix,iy) sits at
// (x0 + ix*dx, y0 + iy*dy).
struct GridGeom {
  int nx = 0;
  int ny = 0;
  double x0 = 0.0;
  double y0 = 0.0;
  double dx = 0.0;
  double dy = 0.0;

  Vec2 node(int ix, int iy) const { return {x0 + ix * dx, y0 + iy * dy}; }
  double width() const { return (nx - 1) * dx; }
  double height() const { return (ny - 1) * dy; }
  bool contains(const Vec2& p, double pad = 0.0) const {
    return p.x >= x0 - pad && p.x <= x0 + width() + pad && p.y >= y0 - pad &&
           p.y <= y0 + height() + pad;
  }
};

// Row-major (y-major) grid of doubles; the carrier for wave speed, source
// profiles and field snapshots.
struct Raster2D {
  int nx = 0;
  int ny = 0;
  double x0 = 0.0;
  double y0 = 0.0;
  double dx = 0.0;
  double dy = 0.0;
  std::vector<double> values;  // size nx*ny, index iy*nx + ix

  Raster2D() = default;
  Raster2D(const GridGeom& g, double fill = 0.0)
      : nx(g.nx), ny(g.ny), x0(g.x0), y0(g.y0), dx(g.dx), dy(g.dy),
        values(static_cast<size_t>(g.nx) * g.ny, fill) {}

  GridGeom geom() const { return {nx, ny, x0, y0, dx, dy}; }

  double& at(int ix, int iy) { return values[static_cast<size_t>(iy) * nx + ix]; }
  double at(int ix, int iy) const { return values[static_cast<size_t>(iy) * nx + ix]; }

  Vec2 node(int ix, int iy) const { return {x0 + ix * dx, y0 + iy * dy}; }

  bool in_extent(const Vec2& p, double pad = 0.0) const { return geom().contains(p, pad); }

  // Bilinear sample; indices clamped to the grid.
  double sample(const Vec2& p) const;

  double max_abs() const;
  double min_value() const;
  double max_value() const;
  double sum() const;  // plain sum of node values
  double l2_diff_rel(const Raster2D& other) const;  // ||this-other||/||other||
};

// Bit-exact raster file format ("RGF1"): ASCII header followed by
// little-endian 64-bit IEEE floats, row-major.
void write_raster(const Raster2D& r, const std::string& path);
Raster2D read_raster(const std::string& path);

// Wave speed raster with cached extrema c+ = max c, c- = min c.
struct SpeedModel {
  Raster2D raster;
  double c_plus = 0.0;
  double c_minus = 0.0;

  static SpeedModel from_raster(Raster2D r);
};

}  // namespace recho
