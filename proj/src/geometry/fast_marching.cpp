#include "geometry/fast_marching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "core/errors.hpp"

namespace recho::geometry {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct HeapItem {
  double t;
  int idx;
  bool operator>(const HeapItem& o) const { return t > o.t; }
};

// Two-sided upwind quadratic for an orthogonal stencil pair with spacings
// (ha, hb); falls back to the one-sided update.
double stencil_solve(double fa, double fb, double ha, double hb, double slowness) {
  if (std::isfinite(fa) && std::isfinite(fb)) {
    const double ia = 1.0 / (ha * ha), ib = 1.0 / (hb * hb);
    const double A = ia + ib;
    const double B = -2.0 * (fa * ia + fb * ib);
    const double C = fa * fa * ia + fb * fb * ib - slowness * slowness;
    const double disc = B * B - 4.0 * A * C;
    if (disc >= 0.0) {
      const double t = (-B + std::sqrt(disc)) / (2.0 * A);
      if (t >= std::max(fa, fb)) return t;
    }
  }
  double t = kInf;
  if (std::isfinite(fa)) t = std::min(t, fa + ha * slowness);
  if (std::isfinite(fb)) t = std::min(t, fb + hb * slowness);
  return t;
}

// Upwind update from accepted neighbors: the axis stencil always, plus the
// 45-degree rotated stencil on square cells (cuts the diagonal anisotropy of
// the first-order scheme).
double upwind_solve(const Raster2D& T, int ix, int iy, double slowness) {
  const double dx = T.dx, dy = T.dy;
  double a = kInf;
  if (ix > 0) a = std::min(a, T.at(ix - 1, iy));
  if (ix + 1 < T.nx) a = std::min(a, T.at(ix + 1, iy));
  double b = kInf;
  if (iy > 0) b = std::min(b, T.at(ix, iy - 1));
  if (iy + 1 < T.ny) b = std::min(b, T.at(ix, iy + 1));
  double t = stencil_solve(a, b, dx, dy, slowness);

  if (std::abs(dx - dy) < 1e-12 * dx) {
    const double hd = dx * std::sqrt(2.0);
    double p = kInf;  // NE/SW pair
    if (ix + 1 < T.nx && iy + 1 < T.ny) p = std::min(p, T.at(ix + 1, iy + 1));
    if (ix > 0 && iy > 0) p = std::min(p, T.at(ix - 1, iy - 1));
    double q = kInf;  // NW/SE pair
    if (ix > 0 && iy + 1 < T.ny) q = std::min(q, T.at(ix - 1, iy + 1));
    if (ix + 1 < T.nx && iy > 0) q = std::min(q, T.at(ix + 1, iy - 1));
    if (std::isfinite(p) && std::isfinite(q))
      t = std::min(t, stencil_solve(p, q, hd, hd, slowness));
  }
  return t;
}

}  // namespace

DistanceField::DistanceField(const Vec2& source, const SpeedField& speed, const GridGeom& grid)
    : src_(source), times_(grid, kInf) {
  if (!grid.contains(source, 1e-12))
    throw GeometryError("distance source lies outside the raster extent");

  const int nx = grid.nx, ny = grid.ny;
  std::vector<char> accepted(static_cast<size_t>(nx) * ny, 0);
  std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<HeapItem>> heap;

  // Slowness sampled once per node.
  std::vector<double> slow(static_cast<size_t>(nx) * ny);
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix)
      slow[static_cast<size_t>(iy) * nx + ix] = 1.0 / speed.value(grid.node(ix, iy));

  // Seed a disc around the source with a short-ray travel time (Simpson rule
  // for the slowness along the chord); kills the point-source singularity of
  // the upwind scheme, which otherwise dominates the error budget.
  const double seed_radius = 8.0 * std::max(grid.dx, grid.dy);
  const int ix0 = std::clamp(static_cast<int>((source.x - grid.x0) / grid.dx), 0, nx - 1);
  const int iy0 = std::clamp(static_cast<int>((source.y - grid.y0) / grid.dy), 0, ny - 1);
  const int pad = 9;
  for (int iy = std::max(0, iy0 - pad); iy <= std::min(ny - 1, iy0 + pad); ++iy) {
    for (int ix = std::max(0, ix0 - pad); ix <= std::min(nx - 1, ix0 + pad); ++ix) {
      const Vec2 p = grid.node(ix, iy);
      const double d = (p - source).norm();
      if (d <= seed_radius) {
        const Vec2 mid = (p + source) * 0.5;
        const double t = d *
                         (1.0 / speed.value(source) + 4.0 / speed.value(mid) +
                          1.0 / speed.value(p)) /
                         6.0;
        times_.at(ix, iy) = t;
        heap.push({t, iy * nx + ix});
      }
    }
  }
  if (heap.empty()) throw GeometryError("distance source seeding failed");

  while (!heap.empty()) {
    const HeapItem top = heap.top();
    heap.pop();
    if (accepted[top.idx]) continue;
    if (top.t > times_.values[top.idx] + 1e-15) continue;  // stale entry
    accepted[top.idx] = 1;
    const int ix = top.idx % nx, iy = top.idx / nx;
    const int nb[8][2] = {{ix - 1, iy},     {ix + 1, iy},     {ix, iy - 1},
                          {ix, iy + 1},     {ix - 1, iy - 1}, {ix + 1, iy - 1},
                          {ix - 1, iy + 1}, {ix + 1, iy + 1}};
    for (const auto& q : nb) {
      const int jx = q[0], jy = q[1];
      if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
      const int jidx = jy * nx + jx;
      if (accepted[jidx]) continue;
      const double t = upwind_solve(times_, jx, jy, slow[jidx]);
      if (t < times_.values[jidx]) {
        times_.values[jidx] = t;
        heap.push({t, jidx});
      }
    }
  }
}

double DistanceField::at(const Vec2& p) const {
  if (!times_.in_extent(p, 1e-12))
    throw GeometryError("distance query point lies outside the raster extent");
  return times_.sample(p);
}

double distance(const Vec2& a, const Vec2& b, const SpeedField& speed) {
  return DistanceField(a, speed).at(b);
}

double distance(const Vec2& a, const Vec2& b, const SpeedField& speed, const GridGeom& grid) {
  return DistanceField(a, speed, grid).at(b);
}

double dist_to_ball(const Vec2& y, const Vec2& p, double r, const SpeedField& speed) {
  if (r < 0.0) throw GeometryError("dist_to_ball: negative radius");
  return std::max(distance(y, p, speed) - r, 0.0);
}

double dist_to_ball(const DistanceField& from_center, const Vec2& y, double r) {
  if (r < 0.0) throw GeometryError("dist_to_ball: negative radius");
  return std::max(from_center.at(y) - r, 0.0);
}

double diameter(const CircleBoundary& omega, const SpeedField& speed, int n_samples) {
  const GridGeom grid = speed.default_grid();
  std::vector<Vec2> pts;
  pts.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i)
    pts.push_back(omega.point(omega.length() * i / n_samples));

  double best = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const DistanceField field(pts[i], speed, grid);
    // Pairs (i, j) with j > i; the metric is symmetric up to solver noise.
    for (int j = i + 1; j < n_samples; ++j) best = std::max(best, field.at(pts[j]));
  }
  return best;
}

}  // namespace recho::geometry
