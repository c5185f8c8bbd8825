#include "translate/centers.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "geometry/fast_marching.hpp"

namespace recho::translate {

using geometry::DistanceField;
using geometry::SpeedField;

double CurvatureBounds::r_omega() const {
  if (K > 0.0) return std::min(kappa, M_PI / (2.0 * std::sqrt(K)));
  return kappa;
}

Vec2 center_of_mass(const std::vector<Vec2>& polyline, bool closed) {
  if (polyline.size() < 2) throw GeometryError("center_of_mass: need a polyline");
  double total = 0.0;
  Vec2 acc{0.0, 0.0};
  const size_t n = polyline.size();
  const size_t segs = closed ? n : n - 1;
  for (size_t i = 0; i < segs; ++i) {
    const Vec2& a = polyline[i];
    const Vec2& b = polyline[(i + 1) % n];
    const double len = (b - a).norm();
    acc += (a + b) * (0.5 * len);
    total += len;
  }
  if (!(total > 0.0)) throw GeometryError("center_of_mass: zero-length polyline");
  return acc / total;
}

Vec2 minimax_center(const std::vector<Vec2>& cloud, const SpeedField& speed,
                    const CurvatureBounds& bounds) {
  if (cloud.empty()) throw GeometryError("minimax_center: empty cloud");

  // Distance field from every cloud point; rho(x) = max over fields.
  std::vector<DistanceField> fields;
  fields.reserve(cloud.size());
  const GridGeom grid = speed.default_grid();
  for (const Vec2& z : cloud) fields.emplace_back(z, speed, grid);

  auto rho = [&](const Vec2& x) {
    double m = 0.0;
    for (const DistanceField& f : fields) m = std::max(m, f.at(x));
    return m;
  };

  // Coarse scan over grid cells; ties broken by lexicographic order via the
  // strict < comparison in scan order.
  Vec2 best = grid.node(0, 0);
  double best_rho = 1e300;
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      const double r = rho(grid.node(ix, iy));
      if (r < best_rho) {
        best_rho = r;
        best = grid.node(ix, iy);
      }
    }
  }

  // Uniqueness gate: the cloud must fit in a ball of radius < r_Omega around
  // the minimizer.
  if (best_rho >= bounds.r_omega())
    throw GeometryError("minimax uniqueness not guaranteed: cloud radius exceeds r_Omega");

  // Coordinate-wise golden-section refinement within one cell.
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int round = 0; round < 3; ++round) {
    for (int axis = 0; axis < 2; ++axis) {
      const double h = axis == 0 ? grid.dx : grid.dy;
      double lo = -h, hi = h;
      auto val = [&](double s) {
        Vec2 p = best;
        (axis == 0 ? p.x : p.y) += s;
        return rho(p);
      };
      double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
      double f1 = val(x1), f2 = val(x2);
      for (int it = 0; it < 40; ++it) {
        if (f1 < f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - gr * (hi - lo);
          f1 = val(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + gr * (hi - lo);
          f2 = val(x2);
        }
      }
      (axis == 0 ? best.x : best.y) += 0.5 * (lo + hi);
    }
  }
  return best;
}

}  // namespace recho::translate
