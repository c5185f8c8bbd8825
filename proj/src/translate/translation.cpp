#include "translate/translation.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "geometry/metric_ops.hpp"

namespace recho::translate {

using geometry::SpeedField;

Mat2 Mat2::inverse() const {
  const double det = a * d - b * c;
  if (std::abs(det) < 1e-300) throw GeometryError("singular transport matrix");
  return {d / det, -b / det, -c / det, a / det};
}

Mat2 transport_matrix(const Vec2& base, const Vec2& x, const SpeedField& speed) {
  if ((x - base).norm() == 0.0) return {};
  const Vec2 e1 = geometry::parallel_transport({1.0, 0.0}, base, x, speed);
  const Vec2 e2 = geometry::parallel_transport({0.0, 1.0}, base, x, speed);
  return {e1.x, e2.x, e1.y, e2.y};
}

Raster2D apply_translation(const Raster2D& base, const TranslationSpec& spec, size_t j,
                           const SpeedField& speed, double region_radius) {
  if (j >= spec.centers.size()) throw GeometryError("translation index out of range");
  const Vec2 xj = spec.centers[j];
  const Vec2 b = spec.base_point;
  Raster2D out(base.geom());

  if (spec.kind == TranslationSpec::Kind::euclidean) {
    const Vec2 shift = xj - b;
    for (int iy = 0; iy < out.ny; ++iy)
      for (int ix = 0; ix < out.nx; ++ix) {
        const Vec2 x = out.node(ix, iy);
        if (region_radius > 0.0 && (x - xj).norm() > region_radius) continue;
        const Vec2 src = x - shift;
        if (!base.in_extent(src)) continue;
        out.at(ix, iy) = base.sample(src);
      }
    return out;
  }

  // Riemannian kind: out(x) = base(b + M^{-1} log_{xj}(x)), M = T_{xj}.
  const Mat2 m_inv = transport_matrix(b, xj, speed).inverse();
  const double radius = region_radius > 0.0
                            ? region_radius
                            : 0.5 * std::max(base.geom().width(), base.geom().height());
  Vec2 warm{0.0, 0.0};
  bool have_warm = false;
  for (int iy = 0; iy < out.ny; ++iy) {
    have_warm = false;  // warm starts only along a row
    for (int ix = 0; ix < out.nx; ++ix) {
      const Vec2 x = out.node(ix, iy);
      if ((x - xj).norm() > radius) continue;
      try {
        const Vec2 vj = geometry::log_map(xj, x, speed, have_warm ? &warm : nullptr);
        warm = vj;
        have_warm = true;
        const Vec2 src = b + m_inv.apply(vj);
        if (!base.in_extent(src)) continue;
        out.at(ix, iy) = base.sample(src);
      } catch (const GeometryError&) {
        have_warm = false;  // leave the cell at zero
      }
    }
  }
  return out;
}

Raster2D to_base_frame(const Raster2D& profile, const Vec2& x, const Vec2& base_point,
                       TranslationSpec::Kind kind, const SpeedField& speed,
                       double region_radius) {
  Raster2D out(profile.geom());
  if (kind == TranslationSpec::Kind::euclidean) {
    const Vec2 shift = x - base_point;
    for (int iy = 0; iy < out.ny; ++iy)
      for (int ix = 0; ix < out.nx; ++ix) {
        const Vec2 v = out.node(ix, iy);
        if (region_radius > 0.0 && (v - base_point).norm() > region_radius) continue;
        const Vec2 src = v + shift;
        if (!profile.in_extent(src)) continue;
        out.at(ix, iy) = profile.sample(src);
      }
    return out;
  }

  const Mat2 m = transport_matrix(base_point, x, speed);
  const double radius = region_radius > 0.0
                            ? region_radius
                            : 0.5 * std::max(out.geom().width(), out.geom().height());
  for (int iy = 0; iy < out.ny; ++iy) {
    for (int ix = 0; ix < out.nx; ++ix) {
      const Vec2 v = out.node(ix, iy);
      if ((v - base_point).norm() > radius) continue;
      try {
        const Vec2 src = geometry::exp_map(x, m.apply(v - base_point), speed);
        if (!profile.in_extent(src)) continue;
        out.at(ix, iy) = profile.sample(src);
      } catch (const GeometryError&) {
        // geodesic left the extent; leave zero
      }
    }
  }
  return out;
}

}  // namespace recho::translate
