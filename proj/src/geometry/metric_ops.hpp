#pragma once

#include "core/vec2.hpp"
#include "geometry/ray.hpp"
#include "geometry/speed_field.hpp"

namespace recho::geometry {

// Exponential map of (extent, c^-2 dx^2): unit-speed geodesic from p in
// direction v, traced for metric length |v|_g = |v| / c(p).
Vec2 exp_map(const Vec2& p, const Vec2& v, const SpeedField& speed);

// Inverse of exp_map by Newton shooting. `guess` (optional) warm-starts the
// solve; throws GeometryError when shooting does not converge.
Vec2 log_map(const Vec2& p, const Vec2& x, const SpeedField& speed,
             const Vec2* guess = nullptr);

// Parallel transport of the vector v from x0 to x along the radial geodesic
// found by shooting; preserves the metric norm |v|_g.
Vec2 parallel_transport(const Vec2& v, const Vec2& x0, const Vec2& x,
                        const SpeedField& speed);

}  // namespace recho::geometry
