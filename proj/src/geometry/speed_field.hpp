#pragma once

#include <memory>

#include "core/config.hpp"
#include "core/raster.hpp"
#include "core/vec2.hpp"

namespace recho::geometry {

// Wave speed as a C1 field over a rectangular extent. Analytic models expose
// exact derivatives; rasterized models go through bicubic interpolation.
class SpeedField {
 public:
  virtual ~SpeedField() = default;

  virtual double value(const Vec2& p) const = 0;
  virtual Vec2 gradient(const Vec2& p) const = 0;

  double c_plus() const { return c_plus_; }
  double c_minus() const { return c_minus_; }
  const GridGeom& extent() const { return extent_; }

  // Reference spacing for ray integration step control.
  virtual double step_hint() const {
    return std::min(extent_.width(), extent_.height()) / 256.0;
  }

  // Default grid for eikonal solves when the caller has no grid of its own.
  virtual GridGeom default_grid() const;

  Raster2D rasterize(const GridGeom& g) const;
  SpeedModel to_model(const GridGeom& g) const;

 protected:
  // Scans the extent to fill in c_plus/c_minus; analytic subclasses may set
  // them directly instead.
  void init_bounds_by_scan(int n = 256);

  GridGeom extent_;
  double c_plus_ = 0.0;
  double c_minus_ = 0.0;
};

class ConstantSpeed : public SpeedField {
 public:
  ConstantSpeed(double c0, const GridGeom& extent);
  double value(const Vec2&) const override { return c0_; }
  Vec2 gradient(const Vec2&) const override { return {0.0, 0.0}; }

 private:
  double c0_;
};

// c(p) = c0 + g . (p - ref), positive on the extent.
class GradientSpeed : public SpeedField {
 public:
  GradientSpeed(double c0, const Vec2& grad, const Vec2& ref, const GridGeom& extent);
  double value(const Vec2& p) const override { return c0_ + dot(g_, p - ref_); }
  Vec2 gradient(const Vec2&) const override { return g_; }

 private:
  double c0_;
  Vec2 g_, ref_;
};

// c(p) = c0 (1 + A exp(-|p - ctr|^2 / (2 s^2))).
class BumpSpeed : public SpeedField {
 public:
  BumpSpeed(double c0, double amplitude, double sigma, const Vec2& center,
            const GridGeom& extent);
  double value(const Vec2& p) const override;
  Vec2 gradient(const Vec2& p) const override;

 private:
  double c0_, a_, s2_;
  Vec2 ctr_;
};

// Bicubic (Catmull-Rom) interpolation of a speed raster; C1 in both
// coordinates, indices clamped at the edges.
class RasterSpeed : public SpeedField {
 public:
  explicit RasterSpeed(SpeedModel model);
  double value(const Vec2& p) const override;
  Vec2 gradient(const Vec2& p) const override;
  double step_hint() const override { return std::min(model_.raster.dx, model_.raster.dy); }
  GridGeom default_grid() const override { return model_.raster.geom(); }

  const SpeedModel& model() const { return model_; }

 private:
  SpeedModel model_;
};

// Builds the field described by a config entry on the given extent.
std::unique_ptr<SpeedField> make_speed_field(const SpeedSpec& spec, const GridGeom& extent);

}  // namespace recho::geometry
