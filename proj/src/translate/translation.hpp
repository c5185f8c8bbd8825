#pragma once

#include <vector>

#include "core/raster.hpp"
#include "core/vec2.hpp"
#include "geometry/speed_field.hpp"

namespace recho::translate {

// Translation model mapping a base-frame profile to the source frames:
// Euclidean shifts f(x - x_j), or the Riemannian pullback through
// exp_{x_j} . T_{x_j} . exp_base^{-1}.
struct TranslationSpec {
  enum class Kind { euclidean, riemannian };
  Kind kind = Kind::euclidean;
  Vec2 base_point{0.0, 0.0};
  std::vector<Vec2> centers;
};

// Parallel transport from base to x as a 2x2 matrix (columns = transported
// basis vectors). Identity for constant speed.
struct Mat2 {
  double a = 1, b = 0, c = 0, d = 1;  // [[a b],[c d]]
  Vec2 apply(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  Mat2 inverse() const;
};

Mat2 transport_matrix(const Vec2& base, const Vec2& x, const geometry::SpeedField& speed);

// Profile in the frame of spec.centers[j] sampled on the base raster's grid.
// Cells whose shooting solve fails are zeroed. `region_radius` limits the
// output to a disc around the center (0 = whole grid).
Raster2D apply_translation(const Raster2D& profile_at_origin, const TranslationSpec& spec,
                           size_t j, const geometry::SpeedField& speed,
                           double region_radius = 0.0);

// Inverse direction: pulls a profile living near x back to the base frame
// (tangent coordinates at base_point offset to raster coordinates).
Raster2D to_base_frame(const Raster2D& profile_at_x, const Vec2& x, const Vec2& base_point,
                       TranslationSpec::Kind kind, const geometry::SpeedField& speed,
                       double region_radius = 0.0);

}  // namespace recho::translate
