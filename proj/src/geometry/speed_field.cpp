#include "geometry/speed_field.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace recho::geometry {

GridGeom SpeedField::default_grid() const {
  GridGeom g = extent_;
  g.nx = 257;
  g.ny = 257;
  g.dx = extent_.width() / (g.nx - 1);
  g.dy = extent_.height() / (g.ny - 1);
  return g;
}

void SpeedField::init_bounds_by_scan(int n) {
  double lo = 1e300, hi = -1e300;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Vec2 p{extent_.x0 + extent_.width() * i / (n - 1),
                   extent_.y0 + extent_.height() * j / (n - 1)};
      const double c = value(p);
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
  }
  c_minus_ = lo;
  c_plus_ = hi;
  if (!(c_minus_ > 0.0)) throw ConfigError("speed field is not strictly positive");
}

Raster2D SpeedField::rasterize(const GridGeom& g) const {
  Raster2D r(g);
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) r.at(ix, iy) = value(g.node(ix, iy));
  return r;
}

SpeedModel SpeedField::to_model(const GridGeom& g) const {
  return SpeedModel::from_raster(rasterize(g));
}

ConstantSpeed::ConstantSpeed(double c0, const GridGeom& extent) : c0_(c0) {
  extent_ = extent;
  if (!(c0 > 0.0)) throw ConfigError("constant speed must be positive");
  c_plus_ = c_minus_ = c0;
}

GradientSpeed::GradientSpeed(double c0, const Vec2& grad, const Vec2& ref,
                             const GridGeom& extent)
    : c0_(c0), g_(grad), ref_(ref) {
  extent_ = extent;
  init_bounds_by_scan();
}

BumpSpeed::BumpSpeed(double c0, double amplitude, double sigma, const Vec2& center,
                     const GridGeom& extent)
    : c0_(c0), a_(amplitude), s2_(sigma * sigma), ctr_(center) {
  extent_ = extent;
  init_bounds_by_scan();
}

double BumpSpeed::value(const Vec2& p) const {
  const double r2 = (p - ctr_).norm2();
  return c0_ * (1.0 + a_ * std::exp(-r2 / (2.0 * s2_)));
}

Vec2 BumpSpeed::gradient(const Vec2& p) const {
  const Vec2 d = p - ctr_;
  const double e = std::exp(-d.norm2() / (2.0 * s2_));
  return d * (-c0_ * a_ * e / s2_);
}

namespace {

// Catmull-Rom weights for parameter t in [0,1] and their derivative.
inline void cr_weights(double t, double w[4], double dw[4]) {
  const double t2 = t * t, t3 = t2 * t;
  w[0] = 0.5 * (-t3 + 2 * t2 - t);
  w[1] = 0.5 * (3 * t3 - 5 * t2 + 2);
  w[2] = 0.5 * (-3 * t3 + 4 * t2 + t);
  w[3] = 0.5 * (t3 - t2);
  dw[0] = 0.5 * (-3 * t2 + 4 * t - 1);
  dw[1] = 0.5 * (9 * t2 - 10 * t);
  dw[2] = 0.5 * (-9 * t2 + 8 * t + 1);
  dw[3] = 0.5 * (3 * t2 - 2 * t);
}

}  // namespace

RasterSpeed::RasterSpeed(SpeedModel model) : model_(std::move(model)) {
  extent_ = model_.raster.geom();
  c_plus_ = model_.c_plus;
  c_minus_ = model_.c_minus;
}

double RasterSpeed::value(const Vec2& p) const {
  const Raster2D& r = model_.raster;
  double fx = std::clamp((p.x - r.x0) / r.dx, 0.0, r.nx - 1.0);
  double fy = std::clamp((p.y - r.y0) / r.dy, 0.0, r.ny - 1.0);
  const int ix = std::min(static_cast<int>(fx), r.nx - 2);
  const int iy = std::min(static_cast<int>(fy), r.ny - 2);
  double wx[4], dwx[4], wy[4], dwy[4];
  cr_weights(fx - ix, wx, dwx);
  cr_weights(fy - iy, wy, dwy);
  double v = 0.0;
  for (int j = 0; j < 4; ++j) {
    const int jy = std::clamp(iy - 1 + j, 0, r.ny - 1);
    double row = 0.0;
    for (int i = 0; i < 4; ++i) {
      const int jx = std::clamp(ix - 1 + i, 0, r.nx - 1);
      row += wx[i] * r.at(jx, jy);
    }
    v += wy[j] * row;
  }
  return v;
}

Vec2 RasterSpeed::gradient(const Vec2& p) const {
  const Raster2D& r = model_.raster;
  double fx = std::clamp((p.x - r.x0) / r.dx, 0.0, r.nx - 1.0);
  double fy = std::clamp((p.y - r.y0) / r.dy, 0.0, r.ny - 1.0);
  const int ix = std::min(static_cast<int>(fx), r.nx - 2);
  const int iy = std::min(static_cast<int>(fy), r.ny - 2);
  double wx[4], dwx[4], wy[4], dwy[4];
  cr_weights(fx - ix, wx, dwx);
  cr_weights(fy - iy, wy, dwy);
  double gx = 0.0, gy = 0.0;
  for (int j = 0; j < 4; ++j) {
    const int jy = std::clamp(iy - 1 + j, 0, r.ny - 1);
    double row = 0.0, drow = 0.0;
    for (int i = 0; i < 4; ++i) {
      const int jx = std::clamp(ix - 1 + i, 0, r.nx - 1);
      row += wx[i] * r.at(jx, jy);
      drow += dwx[i] * r.at(jx, jy);
    }
    gx += wy[j] * drow;
    gy += dwy[j] * row;
  }
  return {gx / r.dx, gy / r.dy};
}

std::unique_ptr<SpeedField> make_speed_field(const SpeedSpec& spec, const GridGeom& extent) {
  switch (spec.kind) {
    case SpeedKind::constant:
      return std::make_unique<ConstantSpeed>(spec.c0, extent);
    case SpeedKind::gradient:
      return std::make_unique<GradientSpeed>(spec.c0, spec.grad, spec.ref, extent);
    case SpeedKind::bump:
      return std::make_unique<BumpSpeed>(spec.c0, spec.amplitude, spec.sigma,
                                         spec.bump_center, extent);
    case SpeedKind::raster:
      return std::make_unique<RasterSpeed>(
          SpeedModel::from_raster(read_raster(spec.raster_path)));
  }
  throw ConfigError("unreachable speed kind");
}

}  // namespace recho::geometry
