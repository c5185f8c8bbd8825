#include "translate/conditions.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "geometry/fast_marching.hpp"
#include "geometry/metric_ops.hpp"
#include "geometry/ray.hpp"

namespace recho::translate {

using geometry::CircleBoundary;
using geometry::CotangentSample;
using geometry::DistanceField;
using geometry::SpeedField;
using wavefield::SourceEvent;
using wavefield::SourceTrain;

ConditionReport check_conditions(const SourceTrain& train, const SpeedField& speed) {
  ConditionReport rep;
  const size_t J = train.size();
  if (J == 0) throw GeometryError("check_conditions: empty train");

  for (const SourceEvent& ev : train)
    rep.radii.push_back(ev.radius > 0.0 ? ev.radius
                                        : wavefield::enclosing_radius(ev.profile, ev.center, speed));
  rep.R = *std::max_element(rep.radii.begin(), rep.radii.end());
  if (J == 1) return rep;  // all conditions vacuous, rho = 0

  // Pairwise travel-time distances between centers.
  std::vector<std::vector<double>> d(J, std::vector<double>(J, 0.0));
  for (size_t j = 0; j < J; ++j) {
    const DistanceField field(train[j].center, speed);
    for (size_t k = 0; k < J; ++k)
      if (k != j) d[j][k] = field.at(train[k].center);
  }

  double ss_margin = 1e300;
  for (size_t j = 0; j + 1 < J; ++j) {
    const double gap = train[j + 1].t - train[j].t;
    const double dist = 0.5 * (d[j][j + 1] + d[j + 1][j]);  // symmetrize solver noise
    rep.gaps.push_back(dist);
    rep.rho = std::max(rep.rho, dist / gap);
    ss_margin = std::min(ss_margin, gap - dist);
  }
  rep.ss_margin = ss_margin;
  rep.ss_pass = ss_margin > 0.0;

  // Chain bound d(x_k, x_j) <= rho |t_k - t_j| for all pairs.
  double ss2_margin = 1e300;
  for (size_t j = 0; j < J; ++j)
    for (size_t k = j + 1; k < J; ++k) {
      const double dist = 0.5 * (d[j][k] + d[k][j]);
      ss2_margin = std::min(ss2_margin, rep.rho * (train[k].t - train[j].t) - dist);
    }
  rep.ss2_margin = ss2_margin;
  rep.ss2_pass = ss2_margin >= -1e-9;

  double ts_margin = 1e300;
  for (size_t j = 1; j < J; ++j)
    ts_margin = std::min(ts_margin,
                         (1.0 - rep.rho) * (train[j].t - train[j - 1].t) - 2.0 * rep.R);
  rep.ts_margin = ts_margin;
  rep.ts_pass = ts_margin > 0.0;

  const double ratio = 1.0 - speed.c_minus() / speed.c_plus();
  const double e2_rhs = rep.rho < 1.0 ? ratio / (1.0 - rep.rho) * rep.R : 1e300;
  rep.e2_margin = (train[1].t - train[0].t) - e2_rhs;
  rep.e2_pass = *rep.e2_margin > 0.0;
  return rep;
}

R2Report check_R2(const Raster2D& profile, double R, const SpeedField& speed) {
  R2Report rep;
  const double c0 = speed.value({0.0, 0.0});
  const GridGeom g = profile.geom();
  const double cell = std::max(g.dx, g.dy);
  const double tol_r = 2.0 * cell / c0;        // radial slack, metric units
  const double ang_tol = 5.0 * M_PI / 180.0;

  const double cutoff = 1e-9 * profile.max_abs();
  std::vector<Vec2> support;
  rep.max_norm = 0.0;
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      if (std::abs(profile.at(ix, iy)) > cutoff) {
        const Vec2 v = g.node(ix, iy);
        support.push_back(v);
        rep.max_norm = std::max(rep.max_norm, v.norm() / c0);
      }
  if (support.empty()) throw GeometryError("check_R2: empty support");

  rep.pass_radius = rep.max_norm <= R + tol_r;

  // Antipodal pair at radius R: both samples near the rim, directions within
  // the angular tolerance of being opposite.
  std::vector<Vec2> rim;
  for (const Vec2& v : support)
    if (v.norm() / c0 >= R - tol_r) rim.push_back(v);
  for (size_t a = 0; a < rim.size() && !rep.pass_antipodal; ++a) {
    for (size_t b = a + 1; b < rim.size(); ++b) {
      if (angle_between(rim[a], -rim[b]) <= ang_tol) {
        rep.pass_antipodal = true;
        rep.witness_plus = rim[a];
        rep.witness_minus = rim[b];
        break;
      }
    }
  }
  return rep;
}

namespace {

// Boundary samples of a support with outward conormal directions.
struct RaySeed {
  Vec2 x;
  Vec2 dir;  // unit (euclidean) outward direction
};

std::vector<RaySeed> seed_rays(const SourceEvent& ev, const SpeedField& speed, int n_rays) {
  std::vector<RaySeed> seeds;
  if (ev.kind == SupportKind::ball) {
    // Radial geodesics from the center hit the geodesic sphere normally;
    // reuse their endpoints and directions.
    for (int i = 0; i < n_rays; ++i) {
      const double a = 2.0 * M_PI * i / n_rays;
      const Vec2 dir{std::cos(a), std::sin(a)};
      try {
        const CotangentSample start = geometry::unit_cotangent(ev.center, dir, speed);
        const CotangentSample end = geometry::geodesic_flow(start, ev.radius, speed);
        seeds.push_back({end.x, normalized(end.xi)});
      } catch (const GeometryError&) {
        // ball rim outside the extent; skip this direction
      }
    }
    return seeds;
  }
  // Raster supports: boundary cells of the support with gradient normals;
  // bands radiate from both sides.
  const Raster2D& p = ev.profile;
  const double cutoff = 1e-6 * p.max_abs();
  std::vector<RaySeed> all;
  for (int iy = 1; iy + 1 < p.ny; ++iy) {
    for (int ix = 1; ix + 1 < p.nx; ++ix) {
      if (std::abs(p.at(ix, iy)) <= cutoff) continue;
      const bool edge = std::abs(p.at(ix - 1, iy)) <= cutoff ||
                        std::abs(p.at(ix + 1, iy)) <= cutoff ||
                        std::abs(p.at(ix, iy - 1)) <= cutoff ||
                        std::abs(p.at(ix, iy + 1)) <= cutoff;
      if (!edge) continue;
      const Vec2 grad{(p.at(ix + 1, iy) - p.at(ix - 1, iy)) / (2.0 * p.dx),
                      (p.at(ix, iy + 1) - p.at(ix, iy - 1)) / (2.0 * p.dy)};
      if (grad.norm() < 1e-14) continue;
      const Vec2 outward = normalized(grad) * -1.0;
      all.push_back({p.node(ix, iy), outward});
      if (ev.kind == SupportKind::band) all.push_back({p.node(ix, iy), outward * -1.0});
    }
  }
  const size_t want = std::max<size_t>(n_rays, 1);
  if (all.size() <= want) return all;
  seeds.reserve(want);
  for (size_t i = 0; i < want; ++i) seeds.push_back(all[i * all.size() / want]);
  return seeds;
}

}  // namespace

Ml1Report check_ml1_outgoing(const SourceTrain& train, const CircleBoundary& omega,
                             const SpeedField& speed, int n_rays) {
  Ml1Report rep;
  const size_t J = train.size();
  std::vector<double> cutoffs(J);
  for (size_t k = 0; k < J; ++k) cutoffs[k] = 1e-6 * train[k].profile.max_abs();

  for (size_t j = 0; j < J; ++j) {
    const std::vector<RaySeed> seeds = seed_rays(train[j], speed, n_rays);
    for (const RaySeed& seed : seeds) {
      ++rep.rays_traced;
      CotangentSample s = geometry::unit_cotangent(seed.x, seed.dir, speed);
      const double ds = speed.step_hint() / speed.c_plus();
      std::vector<char> hit(J, 0);
      double arc = 0.0;
      const double horizon = 10.0 * (speed.extent().width() + speed.extent().height());
      while (arc < horizon) {
        try {
          s = geometry::geodesic_flow(s, ds, speed);
        } catch (const GeometryError&) {
          break;  // left the extent
        }
        arc += ds;
        if (omega.sdf(s.x) > 0.0) break;
        const double t = train[j].t + arc;
        for (size_t k = 0; k < J; ++k) {
          if (k == j || hit[k]) continue;
          if (t < train[k].t - 1e-12) continue;
          if (std::abs(train[k].profile.sample(s.x)) > cutoffs[k]) {
            hit[k] = 1;
            rep.falsifiers.push_back(
                {static_cast<int>(j), static_cast<int>(k), t, s.x});
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace recho::translate
