#include "geometry/ray.hpp"

#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace recho::geometry {

CotangentSample make_cotangent(const Vec2& x, const Vec2& xi, const SpeedField& speed) {
  return {x, xi, speed.value(x) * xi.norm()};
}

CotangentSample unit_cotangent(const Vec2& x, const Vec2& direction, const SpeedField& speed) {
  const double c = speed.value(x);
  const Vec2 d = normalized(direction);
  return {x, d / c, 1.0};
}

namespace {

struct RayState {
  Vec2 x;
  Vec2 xi;
};

// dx/ds = c^2 xi,  dxi/ds = -c |xi|^2 grad c.
inline RayState deriv(const RayState& st, const SpeedField& speed) {
  const double c = speed.value(st.x);
  const Vec2 gc = speed.gradient(st.x);
  return {st.xi * (c * c), gc * (-c * st.xi.norm2())};
}

inline RayState rk4_step(const RayState& st, double h, const SpeedField& speed) {
  const RayState k1 = deriv(st, speed);
  const RayState k2 = deriv({st.x + k1.x * (h / 2), st.xi + k1.xi * (h / 2)}, speed);
  const RayState k3 = deriv({st.x + k2.x * (h / 2), st.xi + k2.xi * (h / 2)}, speed);
  const RayState k4 = deriv({st.x + k3.x * h, st.xi + k3.xi * h}, speed);
  return {st.x + (k1.x + 2 * k2.x + 2 * k3.x + k4.x) * (h / 6),
          st.xi + (k1.xi + 2 * k2.xi + 2 * k3.xi + k4.xi) * (h / 6)};
}

double default_ds(const SpeedField& speed, const TraceOptions& opt) {
  if (opt.ds > 0.0) return opt.ds;
  return speed.step_hint() / (2.0 * speed.c_plus());
}

[[noreturn]] void throw_left_domain(double s) {
  throw GeometryError("ray left computational domain at s=" + std::to_string(s));
}

}  // namespace

CotangentSample geodesic_flow(const CotangentSample& start, double s, const SpeedField& speed,
                              const TraceOptions& opt) {
  // Normalize to the unit cosphere; the flow commutes with covector scaling.
  const double tau = speed.value(start.x) * start.xi.norm();
  if (!(tau > 0.0)) throw GeometryError("geodesic_flow: zero covector");
  RayState st{start.x, start.xi / tau};
  double arc = s * tau;  // arclength in the travel-time metric
  const double dir = arc >= 0.0 ? 1.0 : -1.0;
  arc = std::abs(arc);
  const double ds = default_ds(speed, opt);
  const GridGeom& ext = speed.extent();

  double done = 0.0;
  while (done < arc) {
    const double h = std::min(ds, arc - done);
    st = rk4_step(st, dir * h, speed);
    done += h;
    if (!ext.contains(st.x)) throw_left_domain(dir * done / tau);
  }
  return {st.x, st.xi * tau, tau};
}

GeodesicPath trace_geodesic(const CotangentSample& start, double s, const SpeedField& speed,
                            const TraceOptions& opt) {
  const double tau = speed.value(start.x) * start.xi.norm();
  if (!(tau > 0.0)) throw GeometryError("trace_geodesic: zero covector");
  RayState st{start.x, start.xi / tau};
  const double dir = s >= 0.0 ? 1.0 : -1.0;
  const double arc = std::abs(s) * tau;
  const double ds = default_ds(speed, opt);
  const GridGeom& ext = speed.extent();

  GeodesicPath path;
  path.ds = ds;
  path.nodes.push_back({0.0, st.x, st.xi * tau});
  double done = 0.0;
  while (done < arc) {
    const double h = std::min(ds, arc - done);
    st = rk4_step(st, dir * h, speed);
    done += h;
    if (!ext.contains(st.x)) throw_left_domain(dir * done / tau);
    path.nodes.push_back({dir * done / tau, st.x, st.xi * tau});
  }
  return path;
}

double exit_time(const CotangentSample& start, const CircleBoundary& omega,
                 const SpeedField& speed, const TraceOptions& opt) {
  const double tau = speed.value(start.x) * start.xi.norm();
  if (!(tau > 0.0)) throw GeometryError("exit_time: zero covector");
  if (omega.sdf(start.x) > 1e-9)
    throw GeometryError("exit_time: start point lies outside Omega");

  RayState st{start.x, start.xi / tau};
  const double ds = default_ds(speed, opt);
  const GridGeom& ext = speed.extent();
  const double horizon =
      opt.horizon > 0.0 ? opt.horizon
                        : 4.0 * (ext.width() + ext.height()) / speed.c_minus();

  double s_in = 0.0;
  RayState at_in = st;
  double s = 0.0;
  while (s < horizon) {
    const RayState next = rk4_step(st, ds, speed);
    s += ds;
    if (!ext.contains(next.x)) throw_left_domain(s / tau);
    if (omega.sdf(next.x) > 0.0) {
      // Bracketed between s_in and s; bisect on the step from at_in.
      double lo = s_in, hi = s;
      for (int it = 0; it < 200 && (hi - lo) > 1e-9 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        const RayState pm = rk4_step(at_in, mid - s_in, speed);
        if (omega.sdf(pm.x) > 0.0) hi = mid;
        else lo = mid;
      }
      return 0.5 * (lo + hi) / tau;
    }
    s_in = s;
    at_in = next;
    st = next;
  }
  throw GeometryError("trapping suspected: no boundary exit before horizon");
}

BoundaryCotangentSample psi_forward(double t, const CotangentSample& s,
                                    const CircleBoundary& omega, const SpeedField& speed,
                                    const TraceOptions& opt) {
  const double tau = speed.value(s.x) * s.xi.norm();
  const double sigma = exit_time(s, omega, speed, opt);
  const CotangentSample exit = geodesic_flow(s, sigma, speed, opt);
  const Vec2 that = omega.tangent_at(exit.x);
  const double c_y = speed.value(exit.x);
  BoundaryCotangentSample b;
  b.r = t + sigma * tau;
  b.y = exit.x;
  b.tau = tau;
  b.eta_prime = c_y * dot(exit.xi, that);  // signed metric norm of the tangential part
  return b;
}

CotangentSample psi_inverse(double t, const BoundaryCotangentSample& b,
                            const CircleBoundary& omega, const SpeedField& speed,
                            const TraceOptions& opt) {
  if (std::abs(b.eta_prime) > b.tau * (1.0 + 1e-12))
    throw GeometryError("non-characteristic boundary covector: |eta'| > tau");
  const double a = std::sqrt(std::max(0.0, b.tau * b.tau - b.eta_prime * b.eta_prime));
  const double c_y = speed.value(b.y);
  const Vec2 that = omega.tangent_at(b.y);
  const Vec2 nhat = omega.normal_at(b.y);
  // Exit covector with |.|_g = tau, then reversed for the back trace.
  const Vec2 xi_exit = (that * b.eta_prime + nhat * a) / c_y;
  const double sigma = (b.r - t) / b.tau;
  if (sigma < 0.0) throw GeometryError("psi_inverse: datum earlier than target time");

  const CotangentSample back = geodesic_flow({b.y, -xi_exit, b.tau}, sigma, speed, opt);
  const double tol = 2.0 * speed.step_hint();
  if (omega.sdf(back.x) > tol) throw GeometryError("back-propagation left Omega");
  return {back.x, -back.xi, b.tau};
}

}  // namespace recho::geometry
