#include "geometry/metric_ops.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace recho::geometry {

Vec2 exp_map(const Vec2& p, const Vec2& v, const SpeedField& speed) {
  const double vn = v.norm();
  if (vn == 0.0) return p;
  const double c = speed.value(p);
  const CotangentSample start = unit_cotangent(p, v, speed);
  const double len = vn / c;  // metric length of v
  return geodesic_flow(start, len, speed).x;
}

Vec2 log_map(const Vec2& p, const Vec2& x, const SpeedField& speed, const Vec2* guess) {
  const Vec2 chord = x - p;
  const double cn = chord.norm();
  if (cn == 0.0) return {0.0, 0.0};

  Vec2 v = guess ? *guess
                 : chord * (2.0 * speed.value(p) / (speed.value(p) + speed.value(x)));
  const double scale = std::max(1.0, cn);
  const double tol = 1e-11 * scale;
  const double fd = 1e-7 * scale;

  auto shoot = [&](const Vec2& w) { return exp_map(p, w, speed) - x; };

  Vec2 f = shoot(v);
  for (int it = 0; it < 60; ++it) {
    if (f.norm() <= tol) return v;
    // Finite-difference Jacobian of the shot endpoint.
    const Vec2 fx = shoot({v.x + fd, v.y});
    const Vec2 fy = shoot({v.x, v.y + fd});
    const double j11 = (fx.x - f.x) / fd, j12 = (fy.x - f.x) / fd;
    const double j21 = (fx.y - f.y) / fd, j22 = (fy.y - f.y) / fd;
    const double det = j11 * j22 - j12 * j21;
    if (std::abs(det) < 1e-14) break;
    const Vec2 step{(-j22 * f.x + j12 * f.y) / det, (j21 * f.x - j11 * f.y) / det};
    // Backtracking in case the full step shoots out of the extent.
    double lambda = 1.0;
    for (int bt = 0; bt < 8; ++bt) {
      const Vec2 cand = v + step * lambda;
      try {
        const Vec2 fc = shoot(cand);
        if (fc.norm() < f.norm() || lambda < 0.2) {
          v = cand;
          f = fc;
          break;
        }
      } catch (const GeometryError&) {
        // fell off the extent; shorten
      }
      lambda *= 0.5;
      if (bt == 7) return v;  // stuck; let the convergence check below fail
    }
  }
  if (f.norm() <= 1e-7 * scale) return v;  // accept slightly loose roots
  throw GeometryError("no radial geodesic found (shooting failed to converge)");
}

namespace {

struct TState {
  Vec2 x, xi, V;
};

// Joint geodesic + parallel-transport derivative for the metric c^-2 dx^2.
TState deriv(const TState& st, const SpeedField& speed) {
  const double c = speed.value(st.x);
  const Vec2 gc = speed.gradient(st.x);
  const Vec2 xdot = st.xi * (c * c);
  TState d;
  d.x = xdot;
  d.xi = gc * (-c * st.xi.norm2());
  d.V = xdot * (dot(gc, st.V) / c) + st.V * (dot(gc, xdot) / c) - gc * (dot(xdot, st.V) / c);
  return d;
}

TState rk4(const TState& st, double h, const SpeedField& speed) {
  auto add = [](const TState& a, const TState& b, double w) {
    return TState{a.x + b.x * w, a.xi + b.xi * w, a.V + b.V * w};
  };
  const TState k1 = deriv(st, speed);
  const TState k2 = deriv(add(st, k1, h / 2), speed);
  const TState k3 = deriv(add(st, k2, h / 2), speed);
  const TState k4 = deriv(add(st, k3, h), speed);
  TState out = st;
  out.x = st.x + (k1.x + 2 * k2.x + 2 * k3.x + k4.x) * (h / 6);
  out.xi = st.xi + (k1.xi + 2 * k2.xi + 2 * k3.xi + k4.xi) * (h / 6);
  out.V = st.V + (k1.V + 2 * k2.V + 2 * k3.V + k4.V) * (h / 6);
  return out;
}

}  // namespace

Vec2 parallel_transport(const Vec2& v, const Vec2& x0, const Vec2& x,
                        const SpeedField& speed) {
  if ((x - x0).norm() == 0.0) return v;
  const Vec2 dir = log_map(x0, x, speed);
  const double c0 = speed.value(x0);
  const double len = dir.norm() / c0;

  TState st;
  st.x = x0;
  st.xi = normalized(dir) / c0;  // unit cosphere covector along the radial geodesic
  st.V = v;
  const double ds = speed.step_hint() / (2.0 * speed.c_plus());
  double done = 0.0;
  while (done < len) {
    const double h = std::min(ds, len - done);
    st = rk4(st, h, speed);
    done += h;
    if (!speed.extent().contains(st.x))
      throw GeometryError("parallel transport path left the extent");
  }
  return st.V;
}

}  // namespace recho::geometry
